#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lsmm/generator.hpp"
#include "lsmm/linalg.hpp"
#include "lsmm/types.hpp"

namespace lsmm {

/// Real SISO state-space system x' = Ax + Bu, y = Cx.
struct StateSpace {
    Matrix A;  // n x n
    Matrix B;  // n x 1
    Matrix C;  // 1 x n

    [[nodiscard]] int order() const { return static_cast<int>(A.rows()); }
    void validate() const;
};

/// Moments eta_j(s_i) ordered block-wise by (point, order), following the
/// normalized point order of the spec.
struct MomentSet {
    std::vector<Complex> values;
    InterpolationSpec spec;
};

/// The degrees of freedom of the reduction family: projector P, gain Delta,
/// weight T, and the derived right inverse Q.
struct ReductionParams {
    Matrix P;      // r x nu
    Matrix Delta;  // nu x 1
    Matrix T;      // nu x nu
    Matrix Q;      // nu x r

    [[nodiscard]] int r() const { return static_cast<int>(P.rows()); }
};

/// Reduced model xi' = F xi + G v, psi = H xi.
struct ReducedModel {
    Matrix F;  // r x r
    Matrix G;  // r x 1
    Matrix H;  // 1 x r
    std::optional<ReductionParams> provenance;
    // Whether sigma(F) and sigma(S) were disjoint at construction time;
    // solve_relaxed flags a clash here instead of failing.
    bool spectra_disjoint_from_generator = true;

    [[nodiscard]] int order() const { return static_cast<int>(F.rows()); }
};

/// Moments from the resolvent closed form eta_k(s) = C (sI - A)^-(k+1) B.
MomentSet moments_closed_form(const StateSpace& sys, const InterpolationSpec& spec);

/// Unique solution of A*Pi + B*L = Pi*S.
Matrix solve_pi(const StateSpace& sys, const SignalGenerator& gen);

/// Least-squares index || (C Pi - H P) T ||^2 with P the unique solution of
/// F*P + G*L = P*S.
double index_J(const StateSpace& sys, const ReducedModel& model, const SignalGenerator& gen,
               const Matrix& T);

/// Right inverse Q = T T^T P^T (P T T^T P^T)^-1 of P.
Matrix derive_Q(const Matrix& P, const Matrix& T);

/// Family member F = P (S - Delta L) Q, G = P Delta, H = C Pi Q. Verifies
/// admissibility of the parameters and reports violations individually.
ReducedModel assemble_family(const StateSpace& sys, const SignalGenerator& gen,
                             const ReductionParams& params);

/// Solves the relaxed problem for fixed P: H by unconstrained least squares,
/// (F, G) from the linear constraint F*P + G*L = P*S.
ReducedModel solve_relaxed(const StateSpace& sys, const SignalGenerator& gen, const Matrix& P,
                           const Matrix& T);

/// A-priori bound on the worst-case steady-state rms gain: ||C Pi - H P||.
double error_bound(const StateSpace& sys, const ReducedModel& model, const SignalGenerator& gen);

/// Parameter selection of the eigenvalue-preserving pipeline: Delta places
/// sigma(S - Delta L) at the nu dominant eigenvalues of A and P spans the r
/// dominant left eigenrows. When the targets cluster too tightly for the
/// placed spectrum to be resolved in double precision, the same family member
/// is built directly from resolvent rows (the row space of P is independent
/// of Delta), with Delta the minimum-norm gain meeting the kept conditions.
ReductionParams dominant_projection_params(const Matrix& A, const SignalGenerator& gen,
                                           const CanonicalForm& canon, int r);

/// Full eigenvalue-preserving pipeline: place sigma(S - Delta L) at the nu
/// dominant eigenvalues of A, project onto the r dominant ones.
std::pair<ReducedModel, ReductionParams> dominant_reduction_pipeline(const StateSpace& sys,
                                                                     const InterpolationSpec& spec,
                                                                     int r);

/// Order-nu surrogate matching all nu moments: F = S - Delta L, G = Delta,
/// H = C Pi.
ReducedModel surrogate_model(const StateSpace& sys, const SignalGenerator& gen,
                             const Matrix& Delta);

/// Projected generator S_bar = P S Q, L_bar = L Q (requires P Q = I).
SignalGenerator surrogate_generator(const SignalGenerator& gen, const Matrix& P, const Matrix& Q);

/// The nu dominant eigenvalues of A (dominance order, pairs intact).
std::vector<Complex> dominant_eigenvalues(const Matrix& A, int count);

/// PBH controllability test for the pair (F, G).
bool is_controllable(const Matrix& F, const Matrix& G);

}  // namespace lsmm
