#include "lsmm/polymap.hpp"

#include <algorithm>
#include <cmath>

namespace lsmm {

int multi_index_degree(const MultiIndex& alpha) {
    int d = 0;
    for (int a : alpha) d += a;
    return d;
}

std::vector<MultiIndex> homogeneous_indices(int dim, int degree) {
    std::vector<MultiIndex> out;
    MultiIndex current(dim, 0);
    auto recurse = [&](auto&& self, int idx, int remaining) -> void {
        if (idx + 1 == dim) {
            current[idx] = remaining;
            out.push_back(current);
            return;
        }
        for (int c = remaining; c >= 0; --c) {
            current[idx] = c;
            self(self, idx + 1, remaining - c);
        }
    };
    if (dim == 0) return out;
    recurse(recurse, 0, degree);
    return out;
}

long monomial_count(int dim, int degree) {
    // C(degree + dim - 1, dim - 1)
    long num = 1;
    for (int i = 1; i < dim; ++i) {
        num = num * (degree + i) / i;
    }
    return num;
}

PolyMap::PolyMap(int num_inputs, int num_outputs, int max_degree)
    : num_inputs_(num_inputs), num_outputs_(num_outputs), max_degree_(max_degree),
      coeffs_(num_outputs) {
    if (num_inputs < 1 || num_outputs < 1 || max_degree < 0) {
        throw Error("PolyMap: invalid shape");
    }
}

PolyMap PolyMap::linear(const Matrix& M) {
    PolyMap p(static_cast<int>(M.cols()), static_cast<int>(M.rows()), 1);
    for (int i = 0; i < M.rows(); ++i) {
        for (int j = 0; j < M.cols(); ++j) {
            if (M(i, j) != 0.0) {
                MultiIndex alpha(M.cols(), 0);
                alpha[j] = 1;
                p.coeffs_[i][alpha] = M(i, j);
            }
        }
    }
    return p;
}

double PolyMap::coeff(int output, const MultiIndex& alpha) const {
    auto it = coeffs_[output].find(alpha);
    return it == coeffs_[output].end() ? 0.0 : it->second;
}

void PolyMap::set_coeff(int output, const MultiIndex& alpha, double value) {
    if (static_cast<int>(alpha.size()) != num_inputs_ || multi_index_degree(alpha) > max_degree_) {
        throw Error("PolyMap: invalid multi-index");
    }
    if (!std::isfinite(value)) throw NonFinite("PolyMap: non-finite coefficient");
    if (value == 0.0) {
        coeffs_[output].erase(alpha);
    } else {
        coeffs_[output][alpha] = value;
    }
}

void PolyMap::add_coeff(int output, const MultiIndex& alpha, double value) {
    set_coeff(output, alpha, coeff(output, alpha) + value);
}

ColVec PolyMap::evaluate(const ColVec& x) const { return evaluate_truncated(x, max_degree_); }

ColVec PolyMap::evaluate_truncated(const ColVec& x, int order) const {
    ColVec y = ColVec::Zero(num_outputs_);
    for (int i = 0; i < num_outputs_; ++i) {
        for (const auto& [alpha, c] : coeffs_[i]) {
            if (multi_index_degree(alpha) > order) continue;
            double mono = c;
            for (int j = 0; j < num_inputs_; ++j) {
                for (int e = 0; e < alpha[j]; ++e) mono *= x[j];
            }
            y[i] += mono;
        }
    }
    return y;
}

Matrix PolyMap::jacobian_at(const ColVec& x) const {
    Matrix J = Matrix::Zero(num_outputs_, num_inputs_);
    for (int i = 0; i < num_outputs_; ++i) {
        for (const auto& [alpha, c] : coeffs_[i]) {
            for (int j = 0; j < num_inputs_; ++j) {
                if (alpha[j] == 0) continue;
                double term = c * alpha[j];
                for (int m = 0; m < num_inputs_; ++m) {
                    const int e = (m == j) ? alpha[m] - 1 : alpha[m];
                    for (int p = 0; p < e; ++p) term *= x[m];
                }
                J(i, j) += term;
            }
        }
    }
    return J;
}

Matrix PolyMap::linear_part() const {
    Matrix M = Matrix::Zero(num_outputs_, num_inputs_);
    for (int i = 0; i < num_outputs_; ++i) {
        for (const auto& [alpha, c] : coeffs_[i]) {
            if (multi_index_degree(alpha) != 1) continue;
            for (int j = 0; j < num_inputs_; ++j) {
                if (alpha[j] == 1) M(i, j) = c;
            }
        }
    }
    return M;
}

PolyMap PolyMap::truncated(int degree) const {
    PolyMap out(num_inputs_, num_outputs_, std::min(degree, max_degree_));
    for (int i = 0; i < num_outputs_; ++i) {
        for (const auto& [alpha, c] : coeffs_[i]) {
            if (multi_index_degree(alpha) <= degree) out.coeffs_[i][alpha] = c;
        }
    }
    return out;
}

PolyMap PolyMap::homogeneous_part(int degree) const {
    PolyMap out(num_inputs_, num_outputs_, std::min(degree, max_degree_));
    for (int i = 0; i < num_outputs_; ++i) {
        for (const auto& [alpha, c] : coeffs_[i]) {
            if (multi_index_degree(alpha) == degree) out.coeffs_[i][alpha] = c;
        }
    }
    return out;
}

bool PolyMap::has_constant_term(double tol) const {
    const MultiIndex zero(num_inputs_, 0);
    for (int i = 0; i < num_outputs_; ++i) {
        if (std::abs(coeff(i, zero)) > tol) return true;
    }
    return false;
}

double PolyMap::max_abs_coeff() const {
    double m = 0.0;
    for (int i = 0; i < num_outputs_; ++i) {
        for (const auto& [alpha, c] : coeffs_[i]) m = std::max(m, std::abs(c));
    }
    return m;
}

PolyMap& PolyMap::operator+=(const PolyMap& other) {
    if (other.num_inputs_ != num_inputs_ || other.num_outputs_ != num_outputs_) {
        throw Error("PolyMap: shape mismatch in addition");
    }
    max_degree_ = std::max(max_degree_, other.max_degree_);
    for (int i = 0; i < num_outputs_; ++i) {
        for (const auto& [alpha, c] : other.coeffs_[i]) {
            add_coeff(i, alpha, c);
        }
    }
    return *this;
}

PolyMap& PolyMap::operator*=(double scalar) {
    for (int i = 0; i < num_outputs_; ++i) {
        for (auto& [alpha, c] : coeffs_[i]) c *= scalar;
    }
    return *this;
}

namespace {

using ScalarPoly = std::map<MultiIndex, double>;

ScalarPoly multiply_truncated(const ScalarPoly& a, const ScalarPoly& b, int degree) {
    ScalarPoly out;
    for (const auto& [alpha, ca] : a) {
        const int da = multi_index_degree(alpha);
        for (const auto& [beta, cb] : b) {
            if (da + multi_index_degree(beta) > degree) continue;
            MultiIndex gamma(alpha.size());
            for (std::size_t j = 0; j < alpha.size(); ++j) gamma[j] = alpha[j] + beta[j];
            out[gamma] += ca * cb;
        }
    }
    return out;
}

}  // namespace

PolyMap PolyMap::compose(const PolyMap& outer, const PolyMap& inner, int degree) {
    if (outer.num_inputs_ != inner.num_outputs_) {
        throw Error("PolyMap::compose: shape mismatch");
    }
    const int nu = inner.num_inputs_;
    PolyMap out(nu, outer.num_outputs_, degree);

    // Memoized powers of each inner component, truncated at the target degree.
    const MultiIndex zero(nu, 0);
    std::vector<std::vector<ScalarPoly>> powers(outer.num_inputs_);
    for (int j = 0; j < outer.num_inputs_; ++j) {
        powers[j].push_back(ScalarPoly{{zero, 1.0}});
    }
    auto power_of = [&](int j, int e) -> const ScalarPoly& {
        while (static_cast<int>(powers[j].size()) <= e) {
            powers[j].push_back(
                multiply_truncated(powers[j].back(), inner.coeffs_[j], degree));
        }
        return powers[j][e];
    };

    for (int i = 0; i < outer.num_outputs_; ++i) {
        ScalarPoly acc;
        for (const auto& [alpha, c] : outer.coeffs_[i]) {
            ScalarPoly term{{zero, c}};
            for (int j = 0; j < outer.num_inputs_ && !term.empty(); ++j) {
                if (alpha[j] > 0) term = multiply_truncated(term, power_of(j, alpha[j]), degree);
            }
            for (const auto& [gamma, cg] : term) acc[gamma] += cg;
        }
        for (const auto& [gamma, cg] : acc) {
            if (cg != 0.0) out.coeffs_[i][gamma] = cg;
        }
    }
    return out;
}

void PolyMap::prune(double tol) {
    for (int i = 0; i < num_outputs_; ++i) {
        for (auto it = coeffs_[i].begin(); it != coeffs_[i].end();) {
            if (std::abs(it->second) <= tol) {
                it = coeffs_[i].erase(it);
            } else {
                ++it;
            }
        }
    }
}

void PolyVectorField::validate() const {
    if (f.num_inputs() != state_dim + 1 || f.num_outputs() != state_dim) {
        throw Error("PolyVectorField: f must map (x, u) in R^{n+1} to R^n");
    }
    if (f.has_constant_term(0.0)) {
        throw Error("PolyVectorField: f(0, 0) must vanish");
    }
}

Matrix PolyVectorField::state_jacobian() const {
    return f.linear_part().leftCols(state_dim);
}

Matrix PolyVectorField::input_jacobian() const {
    return f.linear_part().rightCols(1);
}

ColVec PolyVectorField::evaluate(const ColVec& x, double u) const {
    ColVec xu(state_dim + 1);
    xu.head(state_dim) = x;
    xu[state_dim] = u;
    return f.evaluate(xu);
}

PolyVectorField PolyVectorField::from_linear(const Matrix& A, const Matrix& B) {
    const int n = static_cast<int>(A.rows());
    Matrix AB(n, n + 1);
    AB.leftCols(n) = A;
    AB.rightCols(1) = B;
    return PolyVectorField{n, PolyMap::linear(AB)};
}

}  // namespace lsmm
