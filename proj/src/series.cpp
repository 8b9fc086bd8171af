#include "lsmm/series.hpp"

#include <Eigen/LU>
#include <algorithm>
#include <cmath>
#include <map>

namespace lsmm {

namespace {

Spectrum matrix_spectrum(const Matrix& M) {
    Eigen::EigenSolver<Matrix> solver(M, false);
    if (solver.info() != Eigen::Success) throw ConvergenceFailure("eigenvalue iteration failed");
    return cluster_spectrum(solver.eigenvalues());
}

// (pi(omega), L omega) as a single map R^nu -> R^{n+1}, from the terms of pi
// computed so far.
PolyMap stack_with_input(const PolyMap& pi, const Matrix& L) {
    PolyMap stacked(pi.num_inputs(), pi.num_outputs() + 1, pi.max_degree());
    for (int i = 0; i < pi.num_outputs(); ++i) {
        for (const auto& [alpha, c] : pi.terms(i)) stacked.set_coeff(i, alpha, c);
    }
    for (int j = 0; j < pi.num_inputs(); ++j) {
        if (L(0, j) != 0.0) {
            MultiIndex alpha(pi.num_inputs(), 0);
            alpha[j] = 1;
            stacked.set_coeff(pi.num_outputs(), alpha, L(0, j));
        }
    }
    return stacked;
}

}  // namespace

PdeSeries solve_pde_series(const PolyVectorField& field, const PolyMap& h,
                           const SignalGenerator& gen, int degree, const PdeOptions& options) {
    field.validate();
    if (degree < 1) throw Error("solve_pde_series: degree must be >= 1");
    if (h.num_inputs() != field.state_dim || h.num_outputs() != 1) {
        throw Error("solve_pde_series: h must map the state to a scalar");
    }
    if (h.has_constant_term(0.0)) throw Error("solve_pde_series: h(0) must vanish");

    const int n = field.state_dim;
    const int nu = gen.nu();
    const Matrix A = field.state_jacobian();
    const Matrix B = field.input_jacobian();
    const Spectrum spec_a = matrix_spectrum(A);
    const Spectrum spec_s = matrix_spectrum(gen.S);

    PolyMap pi(nu, n, degree);
    ColVec state_scale(n);
    {
        if (!spectra_disjoint(spec_a, spectrum_k(spec_s, 1))) {
            throw Resonance(1, "sigma(A) meets sigma(S)");
        }
        const Matrix Pi1 = solve_sylvester(A, B, gen.L, gen.S);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < nu; ++j) {
                if (Pi1(i, j) != 0.0) {
                    MultiIndex alpha(nu, 0);
                    alpha[j] = 1;
                    pi.set_coeff(i, alpha, Pi1(i, j));
                }
            }
        }
        // Per-state scales (linear response magnitudes). States can span many
        // orders of magnitude (cascaded attenuating stages); solving the
        // homological systems in scaled coordinates keeps every component at
        // relative accuracy.
        for (int i = 0; i < n; ++i) {
            state_scale[i] = std::max(Pi1.row(i).norm(), 1e-150);
        }
    }

    for (int k = 2; k <= degree; ++k) {
        if (!spectra_disjoint(spec_a, spectrum_k(spec_s, k))) {
            throw Resonance(k, "sigma(A) meets sigma^k(S)");
        }
        const std::vector<MultiIndex> basis = homogeneous_indices(nu, k);
        const long m = static_cast<long>(basis.size());
        if (static_cast<long>(n) * m > options.monomial_cap) {
            throw DegreeOverflow("solve_pde_series: homogeneous system exceeds the monomial cap");
        }
        std::map<MultiIndex, int> index_of;
        for (long b = 0; b < m; ++b) index_of[basis[b]] = static_cast<int>(b);

        // Right-hand side: the degree-k part of f(pi_{<k}(omega), L omega).
        // Terms of degree k cannot involve the (still unknown) pi_k because f
        // is at least quadratic beyond its linear part.
        const PolyMap composed = PolyMap::compose(field.f, stack_with_input(pi, gen.L), k);
        const PolyMap fk = composed.homogeneous_part(k);

        // Unknown c[(i, beta)] in state-scaled coordinates; operator
        // (A pi_k - Lie_S pi_k) acting on the homogeneous basis. Lie_S maps
        // omega^alpha to sum_{j,m} alpha_j S(j, m) omega^{alpha - e_j + e_m}.
        Matrix Op = Matrix::Zero(n * m, n * m);
        for (long b = 0; b < m; ++b) {
            const MultiIndex& alpha = basis[b];
            for (int i = 0; i < n; ++i) {
                for (int i2 = 0; i2 < n; ++i2) {
                    if (A(i, i2) != 0.0) {
                        Op(i * m + b, i2 * m + b) += A(i, i2) * state_scale[i2] / state_scale[i];
                    }
                }
            }
            for (int j = 0; j < nu; ++j) {
                if (alpha[j] == 0) continue;
                for (int jm = 0; jm < nu; ++jm) {
                    if (gen.S(j, jm) == 0.0) continue;
                    MultiIndex beta = alpha;
                    beta[j] -= 1;
                    beta[jm] += 1;
                    const int bcol = index_of.at(beta);
                    for (int i = 0; i < n; ++i) {
                        Op(i * m + bcol, i * m + b) -= alpha[j] * gen.S(j, jm);
                    }
                }
            }
        }
        ColVec rhs = ColVec::Zero(n * m);
        for (int i = 0; i < n; ++i) {
            for (const auto& [alpha, c] : fk.terms(i)) {
                rhs[i * m + index_of.at(alpha)] = -c / state_scale[i];
            }
        }
        Eigen::PartialPivLU<Matrix> lu(Op);
        const ColVec c = lu.solve(rhs);
        if (!c.allFinite()) {
            throw Resonance(k, "homological system is singular");
        }
        for (int i = 0; i < n; ++i) {
            for (long b = 0; b < m; ++b) {
                const double value = c[i * m + b] * state_scale[i];
                if (value != 0.0) pi.set_coeff(i, basis[b], value);
            }
        }
    }

    PdeSeries out{pi, PolyMap::compose(h, pi, degree)};
    return out;
}

namespace {

// Shared admissibility gate for the linear-parameter nonlinear family;
// mirrors the checks of assemble_family without a state-space system.
void require_admissible(const SignalGenerator& gen, const Matrix& P, const Matrix& Delta,
                        const Matrix& Q) {
    std::string which;
    std::string detail;
    if (!check_conditioned_invariant(P, gen.S, gen.L)) {
        which = "A_P";
        detail = "ker P is not (S, L) conditioned invariant";
    }
    const Matrix SDL = gen.S - Delta * gen.L;
    if (which.empty() && !check_invariant_under(P, SDL)) {
        which = "A_Delta";
        detail = "ker P is not (S - Delta L)-invariant";
    }
    if (which.empty()) {
        Eigen::EigenSolver<Matrix> ef(Matrix(P * SDL * Q), false);
        Eigen::EigenSolver<Matrix> es(gen.S, false);
        if (!spectra_disjoint(cluster_spectrum(ef.eigenvalues()),
                              cluster_spectrum(es.eigenvalues()))) {
            which = "A_Delta";
            detail = "sigma(P (S - Delta L) Q) meets sigma(S)";
        }
    }
    if (!which.empty()) throw NotAdmissible(which, detail);
}

}  // namespace

NonlinearReducedModel assemble_nonlinear_family(const PolyVectorField& field, const PolyMap& h,
                                                const SignalGenerator& gen, const Matrix& P,
                                                const Matrix& Delta, const Matrix& T, int degree) {
    Eigen::ColPivHouseholderQR<Matrix> qr(P);
    qr.setThreshold(1e-10);
    if (qr.rank() < P.rows()) throw NotAdmissible("A_P", "P is rank deficient");

    const Matrix Q = derive_Q(P, T);
    require_admissible(gen, P, Delta, Q);

    NonlinearReducedModel model;
    model.F_lin = P * (gen.S - Delta * gen.L) * Q;
    model.G_lin = P * Delta;

    // Moment of the model must be well-defined: sigma(F) clear of sigma^k(S).
    const Spectrum spec_f = matrix_spectrum(model.F_lin);
    const Spectrum spec_s = matrix_spectrum(gen.S);
    for (int k = 1; k <= degree; ++k) {
        if (!spectra_disjoint(spec_f, spectrum_k(spec_s, k))) {
            throw Resonance(k, "sigma(F) meets sigma^k(S)");
        }
    }

    const PdeSeries series = solve_pde_series(field, h, gen, degree);
    model.kappa = PolyMap::compose(series.mu, PolyMap::linear(Q), degree);
    return model;
}

double truncate_output(const NonlinearReducedModel& model, int order, const ColVec& xi) {
    if (order > model.kappa.max_degree()) {
        throw OrderExceedsDegree("truncation order exceeds the model degree");
    }
    return model.kappa.evaluate_truncated(xi, order)(0);
}

double nonlinear_error_bound(const PolyMap& mu, const PolyMap& mu_hat,
                             const std::vector<ColVec>& samples) {
    if (mu.num_inputs() != mu_hat.num_inputs() || mu.num_outputs() != 1 ||
        mu_hat.num_outputs() != 1) {
        throw Error("nonlinear_error_bound: maps must be scalar with a common input space");
    }
    if (samples.empty()) throw EmptySampleSet("nonlinear_error_bound: no samples");
    double worst = 0.0;
    for (const ColVec& w : samples) {
        const RowVec diff = (mu.jacobian_at(w) - mu_hat.jacobian_at(w)).row(0);
        worst = std::max(worst, dual_norm_row(diff));
    }
    return worst;
}

PolyMap model_moment(const NonlinearReducedModel& model, const Matrix& P) {
    return PolyMap::compose(model.kappa, PolyMap::linear(P), model.kappa.max_degree());
}

bool moment_matching_on_manifold_check(const NonlinearReducedModel& model, const PolyMap& mu,
                                       const Matrix& Q, const std::vector<ColVec>& samples) {
    const int common = std::min(model.kappa.max_degree(), mu.max_degree());
    const PolyMap mu_on_q = PolyMap::compose(mu.truncated(common), PolyMap::linear(Q), common);
    for (const ColVec& xi : samples) {
        const double lhs = model.kappa.evaluate_truncated(xi, common)(0);
        const double rhs = mu_on_q.evaluate(xi)(0);
        if (std::abs(lhs - rhs) > 1e-9) return false;
    }
    return true;
}

std::vector<ColVec> halton_ball_samples(int dim, double radius, int count) {
    static constexpr int primes[] = {2,  3,  5,  7,  11, 13, 17, 19, 23, 29,
                                     31, 37, 41, 43, 47, 53, 59, 61, 67, 71};
    if (dim > static_cast<int>(sizeof(primes) / sizeof(primes[0]))) {
        throw Error("halton_ball_samples: dimension too large");
    }
    auto halton = [](int index, int base) {
        double f = 1.0;
        double r = 0.0;
        while (index > 0) {
            f /= base;
            r += f * (index % base);
            index /= base;
        }
        return r;
    };
    std::vector<ColVec> out;
    out.reserve(count);
    for (int s = 1; s <= count; ++s) {
        ColVec w(dim);
        for (int j = 0; j < dim; ++j) {
            w[j] = 2.0 * halton(s, primes[j]) - 1.0;  // cube [-1, 1]^dim
        }
        const double norm = w.norm();
        if (norm > 1.0) w /= norm;  // clip to the unit ball
        out.push_back(radius * w);
    }
    return out;
}

}  // namespace lsmm
