#pragma once

#include <random>
#include <vector>

#include "lsmm/benchmarks.hpp"
#include "lsmm/generator.hpp"
#include "lsmm/polymap.hpp"
#include "lsmm/reduction.hpp"

namespace lsmm::test {

inline Matrix random_matrix(std::mt19937_64& rng, int rows, int cols, double scale = 1.0) {
    std::uniform_real_distribution<double> dist(-scale, scale);
    Matrix M(rows, cols);
    for (int i = 0; i < rows; ++i) {
        for (int j = 0; j < cols; ++j) M(i, j) = dist(rng);
    }
    return M;
}

/// Random matrix shifted so every eigenvalue satisfies Re < -margin.
inline Matrix random_stable(std::mt19937_64& rng, int n, double margin = 0.5) {
    Matrix A = random_matrix(rng, n, n);
    Eigen::EigenSolver<Matrix> solver(A, false);
    double max_re = -1e300;
    for (int i = 0; i < n; ++i) max_re = std::max(max_re, solver.eigenvalues()[i].real());
    A.diagonal().array() -= (max_re + margin);
    return A;
}

inline StateSpace random_stable_system(std::mt19937_64& rng, int n, double margin = 0.5) {
    return StateSpace{random_stable(rng, n, margin), random_matrix(rng, n, 1),
                      random_matrix(rng, 1, n)};
}

/// Stable system with distinct real eigenvalues (no conjugate pairs), so any
/// dominance cut is valid. A = V D V^-1 with a mildly conditioned random V.
inline StateSpace random_stable_system_real_spectrum(std::mt19937_64& rng, int n,
                                                     double first = -0.5, double step = -0.7) {
    Matrix D = Matrix::Zero(n, n);
    std::uniform_real_distribution<double> jitter(0.0, 0.3);
    for (int i = 0; i < n; ++i) D(i, i) = first + step * i - jitter(rng);
    const Matrix V = Matrix::Identity(n, n) + 0.3 * random_matrix(rng, n, n);
    const Matrix A = V * D * V.partialPivLu().inverse();
    return StateSpace{A, random_matrix(rng, n, 1), random_matrix(rng, 1, n)};
}

/// Distinct frequencies, roughly log-spaced with jitter.
inline std::vector<double> random_frequencies(std::mt19937_64& rng, int count, double lo = 0.4,
                                              double hi = 4.0) {
    std::uniform_real_distribution<double> jitter(0.8, 1.2);
    std::vector<double> freqs(count);
    for (int i = 0; i < count; ++i) {
        const double base = lo * std::pow(hi / lo, count == 1 ? 0.5 : double(i) / (count - 1));
        freqs[i] = base * jitter(rng);
    }
    return freqs;
}

inline SignalGenerator random_generator(std::mt19937_64& rng, int npairs) {
    return build_generator(InterpolationSpec::from_frequencies(random_frequencies(rng, npairs)));
}

inline ReducedModel random_stable_model(std::mt19937_64& rng, int r, double margin = 0.5) {
    ReducedModel m;
    m.F = random_stable(rng, r, margin);
    m.G = random_matrix(rng, r, 1);
    m.H = random_matrix(rng, 1, r);
    return m;
}

inline StateSpace as_state_space(const ReducedModel& m) { return StateSpace{m.F, m.G, m.H}; }

/// Independent oracle for the least-squares index: the moment-error sum of
/// Eq. (4), computed through the resolvent closed form on both systems.
inline double moment_error_sum(const StateSpace& sys, const ReducedModel& model,
                               const InterpolationSpec& spec) {
    const MomentSet full = moments_closed_form(sys, spec);
    const MomentSet reduced = moments_closed_form(as_state_space(model), spec);
    double sum = 0.0;
    for (std::size_t i = 0; i < full.values.size(); ++i) {
        sum += std::norm(full.values[i] - reduced.values[i]);
    }
    return sum;
}

/// Lie derivative of a polynomial map along the linear field omega -> S omega,
/// i.e. dp/domega (omega) * S * omega, used to check the invariance PDE.
inline PolyMap lie_derivative_along(const PolyMap& p, const Matrix& S) {
    PolyMap out(p.num_inputs(), p.num_outputs(), p.max_degree());
    for (int i = 0; i < p.num_outputs(); ++i) {
        for (const auto& [alpha, c] : p.terms(i)) {
            for (int j = 0; j < p.num_inputs(); ++j) {
                if (alpha[j] == 0) continue;
                for (int m = 0; m < p.num_inputs(); ++m) {
                    if (S(j, m) == 0.0) continue;
                    MultiIndex beta = alpha;
                    beta[j] -= 1;
                    beta[m] += 1;
                    out.add_coeff(i, beta, c * alpha[j] * S(j, m));
                }
            }
        }
    }
    return out;
}

/// (pi(omega), L omega) stacked, for composing with a joint field f(x, u).
inline PolyMap stack_with_input(const PolyMap& pi, const Matrix& L) {
    PolyMap stacked(pi.num_inputs(), pi.num_outputs() + 1, std::max(pi.max_degree(), 1));
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

/// Residual of the invariance PDE truncated at the series degree.
inline PolyMap pde_residual(const PolyVectorField& field, const PolyMap& pi,
                            const SignalGenerator& gen) {
    PolyMap lhs = PolyMap::compose(field.f, stack_with_input(pi, gen.L), pi.max_degree());
    PolyMap rhs = lie_derivative_along(pi, gen.S);
    rhs *= -1.0;
    lhs += rhs;
    return lhs;
}

}  // namespace lsmm::test
