#include "lsmm/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <sstream>

namespace lsmm {

ColVec Trajectory::component(int index) const {
    ColVec out(static_cast<Eigen::Index>(values.size()));
    for (std::size_t i = 0; i < values.size(); ++i) out[static_cast<Eigen::Index>(i)] = values[i][index];
    return out;
}

void SimConfig::validate() const {
    if (t_final <= 0.0) throw ConfigError("sim config: t_final must be positive");
    if (rel_tol <= 0.0 || abs_tol <= 0.0) throw ConfigError("sim config: tolerances must be positive");
    if (steady_state_fraction <= 0.0 || steady_state_fraction >= 1.0) {
        throw ConfigError("sim config: steady_state_fraction must lie in (0, 1)");
    }
    if (output_samples < 2) throw ConfigError("sim config: need at least two samples");
}

std::vector<double> uniform_grid(double t_final, int count) {
    std::vector<double> t(count);
    for (int i = 0; i < count; ++i) t[i] = t_final * i / (count - 1);
    return t;
}

Trajectory integrate_rk23(const VectorField& field, const ColVec& x0,
                          const std::vector<double>& sample_times, const SimConfig& config) {
    config.validate();
    for (std::size_t i = 0; i < sample_times.size(); ++i) {
        if (sample_times[i] < 0.0 || sample_times[i] > config.t_final ||
            (i > 0 && sample_times[i] <= sample_times[i - 1])) {
            throw Error("integrate_rk23: sample times must be ascending within [0, t_final]");
        }
    }

    Trajectory traj;
    traj.times = sample_times;
    traj.values.reserve(sample_times.size());

    double t = 0.0;
    ColVec y = x0;
    ColVec k1 = field(t, y);
    traj.meta.field_evals = 1;
    std::size_t next_sample = 0;
    while (next_sample < sample_times.size() && sample_times[next_sample] <= 0.0) {
        traj.values.push_back(y);
        ++next_sample;
    }

    auto scaled_error = [&](const ColVec& err, const ColVec& a, const ColVec& b) {
        double acc = 0.0;
        for (Eigen::Index i = 0; i < err.size(); ++i) {
            const double scale =
                config.abs_tol + config.rel_tol * std::max(std::abs(a[i]), std::abs(b[i]));
            acc += (err[i] / scale) * (err[i] / scale);
        }
        return std::sqrt(acc / static_cast<double>(err.size()));
    };

    // Initial step from the usual 0.01 * |y| / |f| heuristic.
    double h;
    {
        const double d0 = y.norm() + config.abs_tol;
        const double d1 = k1.norm() + 1e-300;
        h = std::min(0.01 * d0 / d1, config.t_final / 10.0);
        h = std::max(h, config.t_final * 1e-10);
    }

    const double min_step = config.t_final * 1e-14;
    while (t < config.t_final) {
        h = std::min(h, config.t_final - t);
        if (h < min_step || h < 16.0 * std::numeric_limits<double>::epsilon() * std::max(t, 1.0)) {
            throw StepSizeUnderflow("integrate_rk23: step size underflow at t = " + std::to_string(t));
        }

        const ColVec k2 = field(t + 0.5 * h, y + (0.5 * h) * k1);
        const ColVec k3 = field(t + 0.75 * h, y + (0.75 * h) * k2);
        const ColVec y_new = y + h * ((2.0 / 9.0) * k1 + (1.0 / 3.0) * k2 + (4.0 / 9.0) * k3);
        const ColVec k4 = field(t + h, y_new);
        traj.meta.field_evals += 3;
        const ColVec err =
            h * ((-5.0 / 72.0) * k1 + (1.0 / 12.0) * k2 + (1.0 / 9.0) * k3 - (1.0 / 8.0) * k4);
        if (!y_new.allFinite()) throw NonFiniteState("integrate_rk23: state became non-finite");

        const double e = scaled_error(err, y, y_new);
        if (e <= 1.0) {
            // Dense output on [t, t + h] by cubic Hermite interpolation, in
            // incremental form so quiescent states are reproduced exactly.
            const double t_new = t + h;
            const ColVec d = (y_new - y) / h;
            const ColVec c2 = 3.0 * d - 2.0 * k1 - k4;
            const ColVec c3 = k1 + k4 - 2.0 * d;
            while (next_sample < sample_times.size() && sample_times[next_sample] <= t_new) {
                const double theta = (sample_times[next_sample] - t) / h;
                traj.values.push_back(y + (h * theta) * (k1 + theta * (c2 + theta * c3)));
                ++next_sample;
            }
            t = t_new;
            y = y_new;
            k1 = k4;  // FSAL
            ++traj.meta.steps_accepted;
        } else {
            ++traj.meta.steps_rejected;
        }
        const double factor = std::clamp(0.9 * std::pow(std::max(e, 1e-300), -1.0 / 3.0), 0.2, 5.0);
        h *= factor;
    }
    while (next_sample < sample_times.size()) {
        traj.values.push_back(y);
        ++next_sample;
    }
    return traj;
}

namespace {

Trajectory project_output(const Trajectory& full, const std::function<ColVec(const ColVec&)>& map) {
    Trajectory out;
    out.times = full.times;
    out.meta = full.meta;
    out.values.reserve(full.values.size());
    for (const ColVec& v : full.values) out.values.push_back(map(v));
    return out;
}

double slowest_decay_rate(const Matrix& M) {
    Eigen::EigenSolver<Matrix> solver(M, false);
    double max_re = -std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
        max_re = std::max(max_re, solver.eigenvalues()[i].real());
    }
    return max_re;
}

void check_generator_excitation(const SignalGenerator& gen) {
    // (S, omega0) controllability is an excitation condition only; a failure
    // just means the trajectory underestimates the worst case.
    const Eigen::Index nu = gen.S.rows();
    Matrix K(nu, nu);
    ColVec v = gen.omega0;
    for (Eigen::Index k = 0; k < nu; ++k) {
        K.col(k) = v;
        v = gen.S * v;
    }
    Eigen::ColPivHouseholderQR<Matrix> qr(K);
    qr.setThreshold(1e-12);
    if (qr.rank() < nu && std::getenv("LSMM_LOG") != nullptr) {
        std::fprintf(stderr, "[lsmm] warning: (S, omega0) is not controllable\n");
    }
}

}  // namespace

Trajectory simulate_interconnection(const SignalGenerator& gen, const StateSpace& sys,
                                    const SimConfig& config) {
    sys.validate();
    check_generator_excitation(gen);
    const int nu = gen.nu();
    const int n = sys.order();
    ColVec z0 = ColVec::Zero(nu + n);
    z0.head(nu) = gen.omega0;
    const Matrix S = gen.S;
    const Matrix BL = sys.B * gen.L;
    const Matrix A = sys.A;
    VectorField field = [&, nu, n](double, const ColVec& z) {
        ColVec dz(nu + n);
        dz.head(nu) = S * z.head(nu);
        dz.tail(n) = A * z.tail(n) + BL * z.head(nu);
        return dz;
    };
    Trajectory full =
        integrate_rk23(field, z0, uniform_grid(config.t_final, config.output_samples), config);
    return project_output(full, [&](const ColVec& z) {
        return ColVec((sys.C * z.tail(n)));
    });
}

Trajectory simulate_interconnection(const SignalGenerator& gen, const PolyVectorField& fld,
                                    const PolyMap& h, const SimConfig& config) {
    fld.validate();
    check_generator_excitation(gen);
    const int nu = gen.nu();
    const int n = fld.state_dim;
    ColVec z0 = ColVec::Zero(nu + n);
    z0.head(nu) = gen.omega0;
    const Matrix S = gen.S;
    const RowVec L = gen.L.row(0);
    VectorField field = [&, nu, n](double, const ColVec& z) {
        ColVec dz(nu + n);
        dz.head(nu) = S * z.head(nu);
        dz.tail(n) = fld.evaluate(z.tail(n), L.dot(z.head(nu)));
        return dz;
    };
    Trajectory full =
        integrate_rk23(field, z0, uniform_grid(config.t_final, config.output_samples), config);
    return project_output(full, [&](const ColVec& z) { return h.evaluate(z.tail(n)); });
}

Trajectory simulate_interconnection(const SignalGenerator& gen, const NonlinearReducedModel& model,
                                    const SimConfig& config) {
    check_generator_excitation(gen);
    const int nu = gen.nu();
    const int r = model.order();
    ColVec z0 = ColVec::Zero(nu + r);
    z0.head(nu) = gen.omega0;
    const Matrix S = gen.S;
    const RowVec L = gen.L.row(0);
    const Matrix F = model.F_lin;
    const Matrix G = model.G_lin;
    VectorField field = [&, nu, r](double, const ColVec& z) {
        ColVec dz(nu + r);
        dz.head(nu) = S * z.head(nu);
        dz.tail(r) = F * z.tail(r) + G * (L.dot(z.head(nu)));
        return dz;
    };
    Trajectory full =
        integrate_rk23(field, z0, uniform_grid(config.t_final, config.output_samples), config);

    std::vector<int> odd_orders;
    for (int o = 1; o <= model.kappa.max_degree(); o += 2) odd_orders.push_back(o);
    return project_output(full, [&](const ColVec& z) {
        ColVec row(1 + static_cast<Eigen::Index>(odd_orders.size()));
        const ColVec xi = z.tail(r);
        row[0] = model.kappa.evaluate(xi)(0);
        for (std::size_t i = 0; i < odd_orders.size(); ++i) {
            row[1 + static_cast<Eigen::Index>(i)] =
                model.kappa.evaluate_truncated(xi, odd_orders[i])(0);
        }
        return row;
    });
}

double rms_value(const Trajectory& traj, double window_start) {
    std::size_t first = 0;
    while (first < traj.times.size() && traj.times[first] < window_start) ++first;
    if (traj.times.size() - first < 2) {
        throw EmptyWindow("rms_value: fewer than two samples in the window");
    }
    double integral = 0.0;
    for (std::size_t i = first; i + 1 < traj.times.size(); ++i) {
        const double dt = traj.times[i + 1] - traj.times[i];
        integral += 0.5 * dt * (traj.values[i].squaredNorm() + traj.values[i + 1].squaredNorm());
    }
    const double span = traj.times.back() - traj.times[first];
    return std::sqrt(integral / span);
}

double estimate_gamma_rms(const StateSpace& sys, const ReducedModel& model,
                          const SignalGenerator& gen, const SimConfig& config) {
    sys.validate();
    config.validate();
    const double re_a = slowest_decay_rate(sys.A);
    if (re_a >= 0.0) throw Unstable("system", "sigma(A) is not contained in the open left half-plane");
    const double re_f = slowest_decay_rate(model.F);
    if (re_f >= 0.0) throw Unstable("model", "sigma(F) is not contained in the open left half-plane");
    const double skew = (gen.S + gen.S.transpose()).norm();
    if (skew > 1e-9 * std::max(1.0, gen.S.norm())) {
        throw NotSkewSymmetric("estimate_gamma_rms: S + S^T != 0");
    }
    check_generator_excitation(gen);

    SimConfig cfg = config;
    cfg.t_final = std::max(config.t_final, 20.0 / std::min(-re_a, -re_f));

    const int nu = gen.nu();
    const int n = sys.order();
    const int r = model.order();
    ColVec z0 = ColVec::Zero(nu + n + r);
    z0.head(nu) = gen.omega0;
    const Matrix S = gen.S;
    const Matrix BL = sys.B * gen.L;
    const Matrix GL = model.G * gen.L;
    VectorField field = [&, nu, n, r](double, const ColVec& z) {
        ColVec dz(nu + n + r);
        dz.head(nu) = S * z.head(nu);
        dz.segment(nu, n) = sys.A * z.segment(nu, n) + BL * z.head(nu);
        dz.tail(r) = model.F * z.tail(r) + GL * z.head(nu);
        return dz;
    };
    Trajectory full =
        integrate_rk23(field, z0, uniform_grid(cfg.t_final, cfg.output_samples), cfg);

    Trajectory err = project_output(full, [&](const ColVec& z) {
        return ColVec(sys.C * z.segment(nu, n) - model.H * z.tail(r));
    });
    Trajectory omega = project_output(full, [&](const ColVec& z) { return ColVec(z.head(nu)); });

    const double window_start = cfg.t_final * (1.0 - cfg.steady_state_fraction);
    const double rms_omega = rms_value(omega, window_start);
    if (rms_omega == 0.0) throw Error("estimate_gamma_rms: generator has zero rms value");
    return rms_value(err, window_start) / rms_omega;
}

Trajectory steady_state_error_prediction(const StateSpace& sys, const ReducedModel& model,
                                         const SignalGenerator& gen,
                                         const std::vector<double>& times) {
    const Matrix Pi = solve_sylvester(sys.A, sys.B, gen.L, gen.S);
    const Matrix P = solve_sylvester(model.F, model.G, gen.L, gen.S);
    const RowVec row = sys.C * Pi - model.H * P;

    const Eigendecomposition ed = eigen_decompose(gen.S);
    const ComplexVector w0 = ed.left * gen.omega0.cast<Complex>();
    Trajectory traj;
    traj.times = times;
    traj.values.reserve(times.size());
    for (double t : times) {
        ComplexVector phase(w0.size());
        for (Eigen::Index i = 0; i < w0.size(); ++i) {
            phase[i] = std::exp(ed.eigenvalues[i] * t) * w0[i];
        }
        const ColVec omega = (ed.right * phase).real();
        traj.values.push_back(ColVec(row * omega));
    }
    return traj;
}

namespace {

std::vector<Complex> freq_response_impl(const Matrix& A, const Matrix& B, const Matrix& C,
                                        const std::vector<double>& omegas) {
    const Eigen::Index n = A.rows();
    Eigen::EigenSolver<Matrix> solver(A, false);
    double scale = 1.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        scale = std::max(scale, 1.0 + std::abs(solver.eigenvalues()[i]));
    }
    const ComplexMatrix Ac = A.cast<Complex>();
    const ComplexVector Bc = B.col(0).cast<Complex>();
    const ComplexRowVec Cc = C.row(0).cast<Complex>();
    std::vector<Complex> out;
    out.reserve(omegas.size());
    for (double w : omegas) {
        const Complex s(0.0, w);
        for (Eigen::Index i = 0; i < n; ++i) {
            if (std::abs(s - solver.eigenvalues()[i]) <= kSpectralTol * scale) {
                std::ostringstream msg;
                msg << "frequency " << w << " rad/s lies in the spectrum";
                throw PointInSpectrum(msg.str());
            }
        }
        out.push_back((Cc * (s * ComplexMatrix::Identity(n, n) - Ac).partialPivLu().solve(Bc))(0));
    }
    return out;
}

}  // namespace

std::vector<Complex> frequency_response(const StateSpace& sys, const std::vector<double>& omegas) {
    sys.validate();
    return freq_response_impl(sys.A, sys.B, sys.C, omegas);
}

std::vector<Complex> frequency_response(const ReducedModel& model,
                                        const std::vector<double>& omegas) {
    return freq_response_impl(model.F, model.G, model.H, omegas);
}

}  // namespace lsmm
