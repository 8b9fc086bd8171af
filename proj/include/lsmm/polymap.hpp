#pragma once

#include <map>
#include <vector>

#include "lsmm/errors.hpp"
#include "lsmm/types.hpp"

namespace lsmm {

/// Exponent vector of a monomial; length equals the number of inputs.
using MultiIndex = std::vector<int>;

int multi_index_degree(const MultiIndex& alpha);

/// Enumerates all multi-indices over `dim` variables with total degree
/// exactly `degree`, in lexicographic order.
std::vector<MultiIndex> homogeneous_indices(int dim, int degree);

/// Number of monomials of degree exactly `degree` in `dim` variables.
long monomial_count(int dim, int degree);

/// Polynomial map R^nu -> R^m truncated at a maximal total degree. Sparse
/// coefficient storage keyed by (output, multi-index).
class PolyMap {
  public:
    PolyMap(int num_inputs, int num_outputs, int max_degree);

    /// Linear map x -> M x as a degree-1 PolyMap.
    static PolyMap linear(const Matrix& M);

    [[nodiscard]] int num_inputs() const { return num_inputs_; }
    [[nodiscard]] int num_outputs() const { return num_outputs_; }
    [[nodiscard]] int max_degree() const { return max_degree_; }

    [[nodiscard]] double coeff(int output, const MultiIndex& alpha) const;
    void set_coeff(int output, const MultiIndex& alpha, double value);
    void add_coeff(int output, const MultiIndex& alpha, double value);

    [[nodiscard]] const std::map<MultiIndex, double>& terms(int output) const {
        return coeffs_[output];
    }

    [[nodiscard]] ColVec evaluate(const ColVec& x) const;
    /// Evaluation keeping only monomials of total degree <= order.
    [[nodiscard]] ColVec evaluate_truncated(const ColVec& x, int order) const;

    /// Exact Jacobian (polynomial differentiation), evaluated at x.
    [[nodiscard]] Matrix jacobian_at(const ColVec& x) const;

    /// Coefficient matrix of the degree-1 part (m x nu).
    [[nodiscard]] Matrix linear_part() const;

    /// Copy keeping only monomials of total degree <= degree.
    [[nodiscard]] PolyMap truncated(int degree) const;

    /// Homogeneous part of the given total degree.
    [[nodiscard]] PolyMap homogeneous_part(int degree) const;

    [[nodiscard]] bool has_constant_term(double tol = 0.0) const;

    /// Largest |coefficient|.
    [[nodiscard]] double max_abs_coeff() const;

    PolyMap& operator+=(const PolyMap& other);
    PolyMap& operator*=(double scalar);

    /// Composition outer(inner(x)) truncated at total degree `degree`.
    /// inner must map into outer's input space.
    static PolyMap compose(const PolyMap& outer, const PolyMap& inner, int degree);

    void prune(double tol = 0.0);

  private:
    int num_inputs_;
    int num_outputs_;
    int max_degree_;
    std::vector<std::map<MultiIndex, double>> coeffs_;
};

/// Polynomial vector field x' = f(x, u) with f stored jointly in (x, u):
/// f has n + 1 inputs (the state then the scalar input) and n outputs.
struct PolyVectorField {
    int state_dim;
    PolyMap f;

    void validate() const;
    [[nodiscard]] Matrix state_jacobian() const;  // A, n x n
    [[nodiscard]] Matrix input_jacobian() const;  // B, n x 1
    [[nodiscard]] ColVec evaluate(const ColVec& x, double u) const;

    /// Linear system as a vector field, for uniform handling in tests/sims.
    static PolyVectorField from_linear(const Matrix& A, const Matrix& B);
};

}  // namespace lsmm
