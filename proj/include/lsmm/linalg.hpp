#pragma once

#include <utility>
#include <vector>

#include "lsmm/errors.hpp"
#include "lsmm/types.hpp"

namespace lsmm {

// Tolerances shared by the spectral predicates. Eigenvalue disjointness uses
// min pairwise distance > kSpectralTol * (1 + max |lambda|).
inline constexpr double kSpectralTol = 1e-8;
inline constexpr double kSubspaceTol = 1e-9;

/// Eigendecomposition with eigenvalues in dominance order (descending real
/// part, ties by ascending |Im|, conjugate pairs adjacent, +Im first).
/// Rows of `left` are scaled so that left * right = I.
struct Eigendecomposition {
    ComplexVector eigenvalues;
    ComplexMatrix right;  // columns are right eigenvectors
    ComplexMatrix left;   // rows are left eigenvectors

    [[nodiscard]] Spectrum spectrum() const;
};

/// Dominance comparison used everywhere an eigenvalue ordering is needed.
bool more_dominant(const Complex& a, const Complex& b);

/// Clusters raw eigenvalues into a Spectrum (distinct values + multiplicities).
Spectrum cluster_spectrum(const ComplexVector& eigenvalues);

/// True when the two spectra are disjoint: min pairwise distance exceeds
/// kSpectralTol * (1 + largest magnitude present).
bool spectra_disjoint(const Spectrum& a, const Spectrum& b);

/// True when the multiset of values is closed under complex conjugation.
bool conjugate_closed(const std::vector<Complex>& values, double tol);

/// Solves A*X + B*L = X*S for X (n x nu) by Kronecker vectorization.
/// Requires sigma(A) and sigma(S) disjoint.
Matrix solve_sylvester(const Matrix& A, const Matrix& B, const Matrix& L, const Matrix& S);

Eigendecomposition eigen_decompose(const Matrix& M);

/// Observability matrix of the pair (S, L): row k equals L * S^k.
Matrix observability_matrix(const Matrix& S, const Matrix& L);

/// PBH observability test: rank [S - lambda I; L] = nu at every eigenvalue.
/// Numerically robust where the stacked-powers rank test is not (widely
/// separated frequency scales).
bool is_observable(const Matrix& S, const Matrix& L);

/// Unique gain Delta (nu x 1) with sigma(S - Delta*L) equal to `targets`.
/// Targets must be closed under conjugation and (S, L) observable.
ColVec pole_place_siso(const Matrix& S, const Matrix& L, const std::vector<Complex>& targets);

/// Dual of the Euclidean norm on row covectors (numerically the 2-norm).
double dual_norm_row(const RowVec& v);
double dual_norm_row(const ComplexRowVec& v);

/// True iff every distinct eigenvalue of S has geometric multiplicity one.
bool is_non_derogatory(const Matrix& S);

/// Real basis of left eigenvectors for the `count` most dominant eigenvalues
/// of M. Real eigenvalues contribute one row; a conjugate pair a+ib (b > 0)
/// contributes the rows [Re w^T; -Im w^T] so that P*M = F_block*P with the
/// 2x2 block [[a, b], [-b, a]].
struct RealEigenbasis {
    Matrix P;        // count x n
    Matrix F_block;  // count x count, block diagonal
};
RealEigenbasis real_left_eigenbasis(const Matrix& M, int count);

}  // namespace lsmm
