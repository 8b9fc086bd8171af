#pragma once

#include <vector>

#include "lsmm/generator.hpp"
#include "lsmm/polymap.hpp"
#include "lsmm/reduction.hpp"

namespace lsmm {

/// Order-by-order solution of the invariance PDE
///   f(pi(omega), L omega) = dpi/domega (omega) * S omega
/// truncated at total degree d, together with the moment mu = h(pi(.)).
struct PdeSeries {
    PolyMap pi;  // nu inputs, n outputs
    PolyMap mu;  // nu inputs, 1 output
};

struct PdeOptions {
    long monomial_cap = 20000;  // cap on unknowns per homogeneous degree
};

PdeSeries solve_pde_series(const PolyVectorField& field, const PolyMap& h,
                           const SignalGenerator& gen, int degree,
                           const PdeOptions& options = {});

/// Reduced model with linear dynamics and a polynomial output map.
struct NonlinearReducedModel {
    Matrix F_lin;              // r x r
    Matrix G_lin;              // r x 1
    PolyMap kappa{1, 1, 0};    // r inputs, 1 output, degree <= d

    [[nodiscard]] int order() const { return static_cast<int>(F_lin.rows()); }
};

/// Family member with linear parameters p = P omega, delta = Delta, q = Q xi:
/// kappa(xi) = h(pi(Q xi)) truncated at the working degree.
NonlinearReducedModel assemble_nonlinear_family(const PolyVectorField& field, const PolyMap& h,
                                                const SignalGenerator& gen, const Matrix& P,
                                                const Matrix& Delta, const Matrix& T, int degree);

/// Evaluates kappa keeping monomials of total degree <= order.
double truncate_output(const NonlinearReducedModel& model, int order, const ColVec& xi);

/// Sampled estimate of sup_omega || dmu/domega - dmu_hat/domega ||.
double nonlinear_error_bound(const PolyMap& mu, const PolyMap& mu_hat,
                             const std::vector<ColVec>& samples);

/// The model moment mu_hat(omega) = kappa(P omega) expanded as a PolyMap.
PolyMap model_moment(const NonlinearReducedModel& model, const Matrix& P);

/// True iff kappa(xi) agrees with mu(Q xi) at every sample (both truncated
/// at the common degree).
bool moment_matching_on_manifold_check(const NonlinearReducedModel& model, const PolyMap& mu,
                                       const Matrix& Q, const std::vector<ColVec>& samples);

/// Low-discrepancy (Halton) sample of the ball ||omega|| <= radius.
std::vector<ColVec> halton_ball_samples(int dim, double radius, int count);

}  // namespace lsmm
