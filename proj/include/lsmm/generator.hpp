#pragma once

#include <optional>
#include <vector>

#include "lsmm/linalg.hpp"
#include "lsmm/types.hpp"

namespace lsmm {

/// Interpolation points with orders. Construction normalizes the order:
/// points are grouped so that conjugate pairs sit adjacent (+Im first) while
/// the first-appearance order of groups is preserved.
class InterpolationSpec {
  public:
    InterpolationSpec(std::vector<Complex> points, std::vector<int> orders);

    /// Builds the spec from real frequencies: f > 0 yields the pair +-i*f
    /// (order `order` each), f == 0 a single real point at the origin.
    static InterpolationSpec from_frequencies(const std::vector<double>& freqs, int order = 0);

    [[nodiscard]] const std::vector<Complex>& points() const { return points_; }
    [[nodiscard]] const std::vector<int>& orders() const { return orders_; }
    [[nodiscard]] int nu() const { return nu_; }

    /// Groups of the normalized point list: a group is either one real point
    /// or a conjugate pair (two consecutive points).
    struct Group {
        int first;    // index into points()
        bool is_pair;  // true: points()[first], points()[first+1] are conjugates
        int order;
        int block_size;  // rows the group occupies in the real S
    };
    [[nodiscard]] const std::vector<Group>& groups() const { return groups_; }

  private:
    std::vector<Complex> points_;
    std::vector<int> orders_;
    std::vector<Group> groups_;
    int nu_ = 0;
};

/// Autonomous generator (S, L) with initial condition omega0.
struct SignalGenerator {
    Matrix S;
    Matrix L;  // 1 x nu
    ColVec omega0;
    std::optional<InterpolationSpec> spec;  // present when built from a spec

    [[nodiscard]] int nu() const { return static_cast<int>(S.rows()); }
};

/// Similarity to the block-diagonal complex Jordan form of the spec:
/// S*Tc = Tc*J and L*Tc = Lambda. T is the realified version of Tc (Tc times
/// a unitary), so T*T^T equals Tc*Tc^H and row norms through T and Tc agree.
struct CanonicalForm {
    ComplexMatrix J;
    ComplexRowVec Lambda;
    ComplexMatrix Tc;
    Matrix T;
};

/// Real (S, L, omega0) from an interpolation spec. Rotation blocks for
/// order-0 conjugate pairs, real Jordan blocks otherwise; L defaults to
/// (1/sqrt(nu)) [1 ... 1] and omega0 to L^T.
SignalGenerator build_generator(const InterpolationSpec& spec);

CanonicalForm build_canonical_T(const SignalGenerator& gen);

/// The set { sum lambda_i k_i : k_i in {0..k}, sum k_i = k } over the
/// distinct eigenvalues, deduplicated.
Spectrum spectrum_k(const Spectrum& s_spec, int k);

/// True iff sigma(A) stays clear of sigma^k(S) for every k <= k_max.
bool check_nonresonance(const Spectrum& a_spec, const Spectrum& s_spec, int k_max);

/// True iff S * (ker P  intersect  ker L) is contained in ker P.
bool check_conditioned_invariant(const Matrix& P, const Matrix& S, const Matrix& L);

/// True iff M * ker P is contained in ker P.
bool check_invariant_under(const Matrix& P, const Matrix& M);

/// Orthonormal basis of the kernel of M (columns), empty when M has full
/// column rank.
Matrix kernel_basis(const Matrix& M);

}  // namespace lsmm
