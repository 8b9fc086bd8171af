// Acceptance suite: runs the end-to-end checks the library must satisfy and
// prints one PASS/FAIL line per criterion. An optional argv[1] selects a
// single criterion by number.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "lsmm/benchmarks.hpp"
#include "lsmm/generator.hpp"
#include "lsmm/reduction.hpp"
#include "lsmm/series.hpp"
#include "lsmm/simulate.hpp"
#include "support.hpp"

using namespace lsmm;

namespace {

struct Check {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& msg) {
        if (!ok) {
            pass = false;
            if (!detail.empty()) detail += "; ";
            detail += msg;
        }
    }
    void note(const std::string& msg) {
        if (!detail.empty()) detail += "; ";
        detail += msg;
    }
};

std::string fmt(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.4g", x);
    return buf;
}

struct Instance {
    StateSpace sys;
    SignalGenerator gen;
    InterpolationSpec spec;
    ReducedModel model;
};

Instance random_instance(std::mt19937_64& rng, int max_n, int max_pairs, int max_r) {
    const int n = 4 + static_cast<int>(rng() % (max_n - 3));
    const int npairs = 1 + static_cast<int>(rng() % max_pairs);
    const int r = 1 + static_cast<int>(rng() % max_r);
    auto spec = InterpolationSpec::from_frequencies(lsmm::test::random_frequencies(rng, npairs));
    SignalGenerator gen = build_generator(spec);
    return Instance{lsmm::test::random_stable_system(rng, n), std::move(gen), std::move(spec),
                    lsmm::test::random_stable_model(rng, r)};
}

// 1: least-squares index equals the independent moment-error sum.
Check criterion1() {
    Check c;
    const auto t0 = std::chrono::steady_clock::now();
    std::mt19937_64 rng(1001);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const Instance inst = random_instance(rng, 8, 4, 3);
        const CanonicalForm cf = build_canonical_T(inst.gen);
        const double J = index_J(inst.sys, inst.model, inst.gen, cf.T);
        const double oracle = lsmm::test::moment_error_sum(inst.sys, inst.model, inst.spec);
        worst = std::max(worst, std::abs(J - oracle) / std::max(1.0, oracle));
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    c.require(worst <= 1e-8, "relative error " + fmt(worst) + " exceeds 1e-8");
    c.require(elapsed < 10.0, "runtime " + fmt(elapsed) + " s exceeds 10 s");
    c.note("worst rel err " + fmt(worst) + ", " + fmt(elapsed) + " s");
    return c;
}

// 2: full-order identity parameters collapse to exact moment matching.
Check criterion2() {
    Check c;
    std::mt19937_64 rng(1002);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 4 + static_cast<int>(rng() % 5);
        const int npairs = 1 + static_cast<int>(rng() % 4);
        const auto spec =
            InterpolationSpec::from_frequencies(lsmm::test::random_frequencies(rng, npairs));
        const StateSpace sys = lsmm::test::random_stable_system(rng, n);
        const SignalGenerator gen = build_generator(spec);
        const int nu = gen.nu();

        std::vector<Complex> targets;
        for (int i = 0; i < nu; ++i) targets.emplace_back(-0.7 - 0.6 * i, 0.0);
        const ColVec delta = pole_place_siso(gen.S, gen.L, targets);
        const ReductionParams params{Matrix::Identity(nu, nu), Matrix(delta),
                                     Matrix::Identity(nu, nu), Matrix::Identity(nu, nu)};
        const ReducedModel model = assemble_family(sys, gen, params);
        const Matrix Pi = solve_pi(sys, gen);
        const double scale = std::max(1.0, (sys.C * Pi).squaredNorm());

        c.require((model.F - (gen.S - delta * gen.L)).norm() <= 1e-12 * (1 + gen.S.norm()),
                  "F != S - Delta L");
        c.require((model.G - delta).norm() <= 1e-12 * (1 + delta.norm()), "G != Delta");
        c.require((model.H - sys.C * Pi).norm() <= 1e-12 * (1 + Pi.norm()), "H != C Pi");
        const double J = index_J(sys, model, gen, Matrix::Identity(nu, nu));
        c.require(J <= 1e-20 * scale, "J = " + fmt(J) + " above 1e-20 scale");
        if (!c.pass) break;
    }
    return c;
}

// 3: relaxed solver agrees with the family and attains the minimum.
Check criterion3() {
    Check c;
    std::mt19937_64 rng(1003);
    for (int trial = 0; trial < 10; ++trial) {
        const int n = 6 + static_cast<int>(rng() % 3);
        const auto spec =
            InterpolationSpec::from_frequencies(lsmm::test::random_frequencies(rng, 3));
        const StateSpace sys = lsmm::test::random_stable_system_real_spectrum(rng, n);
        const auto [model, params] = dominant_reduction_pipeline(sys, spec, 2);
        const SignalGenerator gen = build_generator(spec);
        const ReducedModel relaxed = solve_relaxed(sys, gen, params.P, params.T);

        auto close = [](const Matrix& a, const Matrix& b) {
            return (a - b).lpNorm<Eigen::Infinity>() <=
                   1e-8 * std::max(1.0, b.lpNorm<Eigen::Infinity>());
        };
        c.require(close(relaxed.F, model.F), "relaxed F deviates");
        c.require(close(relaxed.G, model.G), "relaxed G deviates");
        c.require(close(relaxed.H, model.H), "relaxed H deviates");

        // The constraint pins (F, G) for r < nu; admissible perturbations
        // move H only.
        const double J_family = index_J(sys, model, gen, params.T);
        for (int p = 0; p < 1000; ++p) {
            ReducedModel perturbed = model;
            perturbed.H += 0.03 * lsmm::test::random_matrix(rng, 1, model.order());
            const double J_perturbed = index_J(sys, perturbed, gen, params.T);
            if (J_family > J_perturbed + 1e-12) {
                c.require(false, "perturbation beat the family at trial " + std::to_string(trial));
                break;
            }
        }
        if (!c.pass) break;
    }
    return c;
}

// 4: gamma_rms estimate respects the bound; the simulated error converges to
// the steady-state prediction.
Check criterion4() {
    Check c;
    std::mt19937_64 rng(1004);
    double worst_gap = -1e300;
    double worst_decay = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        const Instance inst = random_instance(rng, 8, 4, 3);
        SimConfig cfg;
        cfg.t_final = 44.0;
        cfg.rel_tol = 1e-10;
        cfg.abs_tol = 1e-12;
        cfg.output_samples = 1201;

        const double gamma = estimate_gamma_rms(inst.sys, inst.model, inst.gen, cfg);
        const double bound = error_bound(inst.sys, inst.model, inst.gen);
        worst_gap = std::max(worst_gap, gamma - bound);
        if (gamma > bound + 1e-6) {
            c.require(false, "gamma " + fmt(gamma) + " exceeds bound " + fmt(bound));
            break;
        }

        // decay of the simulated error onto the predicted steady state
        const int nu = inst.gen.nu();
        const int n = inst.sys.order();
        const int r = inst.model.order();
        ColVec z0 = ColVec::Zero(nu + n + r);
        z0.head(nu) = inst.gen.omega0;
        const VectorField field = [&](double, const ColVec& z) {
            ColVec dz(nu + n + r);
            dz.head(nu) = inst.gen.S * z.head(nu);
            dz.segment(nu, n) =
                inst.sys.A * z.segment(nu, n) + inst.sys.B * inst.gen.L * z.head(nu);
            dz.tail(r) = inst.model.F * z.tail(r) + inst.model.G * inst.gen.L * z.head(nu);
            return dz;
        };
        const Trajectory full =
            integrate_rk23(field, z0, uniform_grid(cfg.t_final, cfg.output_samples), cfg);
        const Trajectory pred =
            steady_state_error_prediction(inst.sys, inst.model, inst.gen, full.times);
        for (std::size_t i = 0; i < full.times.size(); ++i) {
            if (full.times[i] < 0.75 * cfg.t_final) continue;
            const double e = (inst.sys.C * full.values[i].segment(nu, n) -
                              inst.model.H * full.values[i].tail(r))(0);
            worst_decay = std::max(worst_decay, std::abs(e - pred.values[i][0]));
        }
        if (worst_decay >= 1e-6) {
            c.require(false,
                      "residual transient " + fmt(worst_decay) + " at trial " + std::to_string(trial));
            break;
        }
    }
    c.note("worst gamma-bound gap " + fmt(worst_gap) + ", worst late transient " +
           fmt(worst_decay));
    return c;
}

// 5: the flexible-structure pipeline preserves the ten dominant eigenvalues.
Check criterion5() {
    Check c;
    FssParams fp;
    fp.modes = 30;
    fp.seed = 1;
    const StateSpace sys = build_fss(fp);
    const std::vector<double> freqs{0.01, 0.1, 1, 5.5, 10, 16, 20, 30, 50, 100, 1000, 10000};
    const auto spec = InterpolationSpec::from_frequencies(freqs);
    const auto [model, params] = dominant_reduction_pipeline(sys, spec, 10);

    std::vector<Complex> targets = dominant_eigenvalues(sys.A, 10);
    std::sort(targets.begin(), targets.end(), more_dominant);
    const Eigendecomposition ed = eigen_decompose(model.F);
    double worst = 0.0;
    for (int i = 0; i < 10; ++i) {
        double best = 1e300;
        for (const Complex& t : targets) best = std::min(best, std::abs(ed.eigenvalues[i] - t));
        worst = std::max(worst, best);
    }
    c.require(worst <= 1e-6, "eigenvalue deviation " + fmt(worst) + " exceeds 1e-6");
    c.require(is_controllable(model.F, model.G), "(F, G) not controllable");
    const SignalGenerator gen = build_generator(spec);
    c.note("worst eigenvalue deviation " + fmt(worst) + ", a-priori bound " +
           fmt(error_bound(sys, model, gen)) +
           " (gamma inequality covered by criterion 4; the reference 0.1218/0.5871 depend on an "
           "unavailable random stream)");
    return c;
}

// 6: order-by-order PDE solutions leave no residual through degree 3.
Check criterion6() {
    Check c;
    std::mt19937_64 rng(1006);
    std::uniform_real_distribution<double> small(-0.3, 0.3);
    double worst_res = 0.0;
    double worst_lin = 0.0;
    for (int trial = 0; trial < 25; ++trial) {
        const int n = 2 + static_cast<int>(rng() % 3);
        const int npairs = 1 + static_cast<int>(rng() % 2);
        const Matrix A = lsmm::test::random_stable(rng, n, 0.8);
        const Matrix B = lsmm::test::random_matrix(rng, n, 1);
        Matrix AB(n, n + 1);
        AB.leftCols(n) = A;
        AB.rightCols(1) = B;
        PolyMap f(n + 1, n, 3);
        const PolyMap linear_part = PolyMap::linear(AB);
        for (int i = 0; i < n; ++i) {
            for (const auto& [alpha, coeff] : linear_part.terms(i)) {
                f.set_coeff(i, alpha, coeff);
            }
            for (int d = 2; d <= 3; ++d) {
                for (const MultiIndex& alpha : homogeneous_indices(n + 1, d)) {
                    if (rng() % 4 == 0) f.set_coeff(i, alpha, small(rng));
                }
            }
        }
        const PolyVectorField field{n, f};
        const PolyMap h = PolyMap::linear(lsmm::test::random_matrix(rng, 1, n));
        const SignalGenerator gen = build_generator(
            InterpolationSpec::from_frequencies(lsmm::test::random_frequencies(rng, npairs)));

        const PdeSeries series = solve_pde_series(field, h, gen, 3);
        const PolyMap residual = lsmm::test::pde_residual(field, series.pi, gen);
        worst_res =
            std::max(worst_res, residual.max_abs_coeff() / std::max(1.0, f.max_abs_coeff()));
        const Matrix Pi = solve_sylvester(A, B, gen.L, gen.S);
        worst_lin = std::max(worst_lin, (series.pi.linear_part() - Pi).lpNorm<Eigen::Infinity>() /
                                            std::max(1.0, Pi.lpNorm<Eigen::Infinity>()));
    }
    c.require(worst_res <= 1e-9, "PDE residual " + fmt(worst_res) + " exceeds 1e-9");
    c.require(worst_lin <= 1e-10, "degree-1 deviation " + fmt(worst_lin) + " exceeds 1e-10");
    c.note("worst residual " + fmt(worst_res) + ", worst degree-1 deviation " + fmt(worst_lin));
    return c;
}

// 7: deterministic saturating-chain benchmark against the published rms
// values. With the stated parameters the plant attenuates the interpolation
// band to ~1e-26, so the reference values presuppose a different time scale;
// the criterion is evaluated faithfully and reported as measured.
Check criterion7() {
    Check c;
    const auto t0 = std::chrono::steady_clock::now();
    const InverterChain chain = build_inverter_chain({});
    const auto spec = InterpolationSpec::from_frequencies({1, 2, 3, 4, 5});
    const SignalGenerator gen = build_generator(spec);
    const CanonicalForm cf = build_canonical_T(gen);
    const ReductionParams params =
        dominant_projection_params(chain.field.state_jacobian(), gen, cf, 4);
    const NonlinearReducedModel model = assemble_nonlinear_family(
        chain.field, chain.output, gen, params.P, params.Delta, params.T, 3);

    SimConfig cfg;
    cfg.t_final = 500.0;
    cfg.rel_tol = 1e-9;
    cfg.abs_tol = 1e-17;
    cfg.steady_state_fraction = 0.2;  // slowest mode at -1/52: transients < 5e-4 by t = 400
    cfg.output_samples = 10001;
    const Trajectory sys_traj = simulate_interconnection(gen, chain.field, chain.output, cfg);
    const Trajectory mod_traj = simulate_interconnection(gen, model, cfg);
    Trajectory e1, e3;
    e1.times = e3.times = sys_traj.times;
    for (std::size_t i = 0; i < sys_traj.values.size(); ++i) {
        const double y = sys_traj.values[i][0];
        e1.values.push_back(ColVec::Constant(1, y - mod_traj.values[i][1]));
        e3.values.push_back(ColVec::Constant(1, y - mod_traj.values[i][2]));
    }
    const double window = cfg.t_final * (1.0 - cfg.steady_state_fraction);
    const double rms1 = rms_value(e1, window);
    const double rms3 = rms_value(e3, window);
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    c.require(rms3 < rms1,
              "rms(y - psi3) = " + fmt(rms3) + " not below rms(y - psi1) = " + fmt(rms1));
    c.require(rms1 > 4.94e-10 / 5 && rms1 < 4.94e-10 * 5,
              "rms(y - psi1) = " + fmt(rms1) + " not within factor 5 of 4.94e-10");
    c.require(rms3 > 3.77e-10 / 5 && rms3 < 3.77e-10 * 5,
              "rms(y - psi3) = " + fmt(rms3) + " not within factor 5 of 3.77e-10");
    c.require(elapsed < 60.0, "runtime " + fmt(elapsed) + " s exceeds 60 s");
    c.note("rms1 " + fmt(rms1) + ", rms3 " + fmt(rms3) + ", " + fmt(elapsed) + " s");
    return c;
}

// 8: moment matching along the manifold holds for assembled models and breaks
// under any single kappa coefficient perturbation above 1e-6.
Check criterion8() {
    Check c;
    struct Case {
        NonlinearReducedModel model;
        PolyMap mu;
        Matrix Q;
        int dim;
    };
    std::vector<Case> cases;

    {
        const InverterChain chain = build_inverter_chain({});
        const auto spec = InterpolationSpec::from_frequencies({1, 2, 3, 4, 5});
        const SignalGenerator gen = build_generator(spec);
        const CanonicalForm cf = build_canonical_T(gen);
        const ReductionParams params =
            dominant_projection_params(chain.field.state_jacobian(), gen, cf, 4);
        const NonlinearReducedModel model = assemble_nonlinear_family(
            chain.field, chain.output, gen, params.P, params.Delta, params.T, 3);
        const PdeSeries series = solve_pde_series(chain.field, chain.output, gen, 3);
        cases.push_back({model, series.mu, params.Q, 4});
    }
    std::mt19937_64 rng(1008);
    std::uniform_real_distribution<double> small(-0.3, 0.3);
    for (int extra = 0; extra < 2; ++extra) {
        const int n = 5 + extra;
        const Matrix A = lsmm::test::random_stable_system_real_spectrum(rng, n).A;
        const Matrix B = lsmm::test::random_matrix(rng, n, 1);
        Matrix AB(n, n + 1);
        AB.leftCols(n) = A;
        AB.rightCols(1) = B;
        PolyMap f(n + 1, n, 3);
        const PolyMap linear_part = PolyMap::linear(AB);
        for (int i = 0; i < n; ++i) {
            for (const auto& [alpha, coeff] : linear_part.terms(i)) {
                f.set_coeff(i, alpha, coeff);
            }
            for (int d = 2; d <= 3; ++d) {
                for (const MultiIndex& alpha : homogeneous_indices(n + 1, d)) {
                    if (rng() % 3 == 0) f.set_coeff(i, alpha, small(rng));
                }
            }
        }
        const PolyVectorField field{n, f};
        const PolyMap h = PolyMap::linear(lsmm::test::random_matrix(rng, 1, n));
        const auto spec =
            InterpolationSpec::from_frequencies(lsmm::test::random_frequencies(rng, 2));
        const SignalGenerator gen = build_generator(spec);
        const CanonicalForm cf = build_canonical_T(gen);
        const ReductionParams params = dominant_projection_params(A, gen, cf, 2);
        const NonlinearReducedModel model =
            assemble_nonlinear_family(field, h, gen, params.P, params.Delta, params.T, 3);
        const PdeSeries series = solve_pde_series(field, h, gen, 3);
        cases.push_back({model, series.mu, params.Q, 2});
    }

    for (std::size_t k = 0; k < cases.size(); ++k) {
        const Case& cs = cases[k];
        const auto samples = halton_ball_samples(cs.dim, 1.0, 64);
        if (!moment_matching_on_manifold_check(cs.model, cs.mu, cs.Q, samples)) {
            c.require(false, "manifold check failed on case " + std::to_string(k));
            continue;
        }
        std::vector<MultiIndex> monomials;
        for (const auto& [alpha, coeff] : cs.model.kappa.terms(0)) monomials.push_back(alpha);
        for (const MultiIndex& alpha : monomials) {
            NonlinearReducedModel perturbed = cs.model;
            perturbed.kappa.add_coeff(0, alpha, 2e-6);
            if (moment_matching_on_manifold_check(perturbed, cs.mu, cs.Q, samples)) {
                c.require(false, "perturbation of a kappa coefficient went undetected");
                break;
            }
        }
    }
    c.note(std::to_string(cases.size()) + " models, every kappa coefficient perturbed");
    return c;
}

}  // namespace

int main(int argc, char** argv) {
    const std::vector<std::pair<const char*, std::function<Check()>>> criteria = {
        {"1 index equals the moment-error sum", criterion1},
        {"2 full-order collapse to exact matching", criterion2},
        {"3 relaxed solver agreement and optimality", criterion3},
        {"4 gamma_rms bound and steady-state decay", criterion4},
        {"5 flexible-structure eigenvalue preservation", criterion5},
        {"6 invariance PDE residual", criterion6},
        {"7 saturating-chain benchmark values", criterion7},
        {"8 moment matching along the manifold", criterion8},
    };

    int selected = 0;
    if (argc > 1) selected = std::atoi(argv[1]);

    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        if (selected != 0 && selected != static_cast<int>(i + 1)) continue;
        Check c;
        try {
            c = criteria[i].second();
        } catch (const std::exception& e) {
            c.pass = false;
            c.detail = std::string("exception: ") + e.what();
        }
        std::printf("criterion %s: %s%s%s\n", criteria[i].first, c.pass ? "PASS" : "FAIL",
                    c.detail.empty() ? "" : " — ", c.detail.c_str());
        std::fflush(stdout);
        if (!c.pass) ++failures;
    }
    return failures;
}
