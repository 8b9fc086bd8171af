#include "lsmm/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace lsmm {

namespace {

void require_finite(const Matrix& M, const char* name) {
    if (!M.allFinite()) {
        throw NonFinite(std::string(name) + " contains NaN or Inf entries");
    }
}

double spectral_scale(const ComplexVector& a, const ComplexVector& b) {
    double m = 0.0;
    for (Eigen::Index i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i]));
    for (Eigen::Index i = 0; i < b.size(); ++i) m = std::max(m, std::abs(b[i]));
    return 1.0 + m;
}

ComplexVector raw_eigenvalues(const Matrix& M) {
    Eigen::EigenSolver<Matrix> solver(M, /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success) {
        throw ConvergenceFailure("eigenvalue iteration did not converge");
    }
    return solver.eigenvalues();
}

// Globally greedy matching of computed eigenvalues to target values: assign
// the closest (target, eigenvalue) pairs first. Returns, per target, the index
// of the matched eigenvalue.
std::vector<int> match_to_targets(const std::vector<Complex>& targets, const ComplexVector& eigs) {
    struct Entry {
        double dist;
        int target;
        int eig;
    };
    std::vector<Entry> entries;
    entries.reserve(targets.size() * eigs.size());
    for (std::size_t j = 0; j < targets.size(); ++j) {
        for (Eigen::Index i = 0; i < eigs.size(); ++i) {
            entries.push_back({std::abs(eigs[i] - targets[j]), static_cast<int>(j),
                               static_cast<int>(i)});
        }
    }
    std::sort(entries.begin(), entries.end(),
              [](const Entry& a, const Entry& b) { return a.dist < b.dist; });
    std::vector<int> match(targets.size(), -1);
    std::vector<bool> used(eigs.size(), false);
    std::size_t assigned = 0;
    for (const Entry& e : entries) {
        if (assigned == targets.size()) break;
        if (match[e.target] >= 0 || used[e.eig]) continue;
        match[e.target] = e.eig;
        used[e.eig] = true;
        ++assigned;
    }
    return match;
}

}  // namespace

bool more_dominant(const Complex& a, const Complex& b) {
    if (a.real() != b.real()) return a.real() > b.real();
    double ia = std::abs(a.imag());
    double ib = std::abs(b.imag());
    if (ia != ib) return ia < ib;
    return a.imag() > b.imag();  // +Im member of a pair first
}

Spectrum cluster_spectrum(const ComplexVector& eigenvalues) {
    double scale = 1.0;
    for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) {
        scale = std::max(scale, 1.0 + std::abs(eigenvalues[i]));
    }
    const double tol = kSpectralTol * scale;

    std::vector<Complex> sorted(eigenvalues.data(), eigenvalues.data() + eigenvalues.size());
    std::sort(sorted.begin(), sorted.end(), more_dominant);

    Spectrum spec;
    for (const Complex& v : sorted) {
        if (!spec.values.empty() && std::abs(spec.values.back() - v) <= tol) {
            ++spec.multiplicities.back();
        } else {
            spec.values.push_back(v);
            spec.multiplicities.push_back(1);
        }
    }
    return spec;
}

Spectrum Eigendecomposition::spectrum() const { return cluster_spectrum(eigenvalues); }

bool spectra_disjoint(const Spectrum& a, const Spectrum& b) {
    double scale = 1.0;
    for (const Complex& v : a.values) scale = std::max(scale, 1.0 + std::abs(v));
    for (const Complex& v : b.values) scale = std::max(scale, 1.0 + std::abs(v));
    const double tol = kSpectralTol * scale;
    for (const Complex& va : a.values) {
        for (const Complex& vb : b.values) {
            if (std::abs(va - vb) <= tol) return false;
        }
    }
    return true;
}

bool conjugate_closed(const std::vector<Complex>& values, double tol) {
    std::vector<bool> used(values.size(), false);
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (used[i] || std::abs(values[i].imag()) <= tol) continue;
        bool found = false;
        for (std::size_t j = 0; j < values.size(); ++j) {
            if (j == i || used[j]) continue;
            if (std::abs(values[j] - std::conj(values[i])) <= tol) {
                used[i] = used[j] = true;
                found = true;
                break;
            }
        }
        if (!found) return false;
    }
    return true;
}

Matrix solve_sylvester(const Matrix& A, const Matrix& B, const Matrix& L, const Matrix& S) {
    require_finite(A, "A");
    require_finite(B, "B");
    require_finite(L, "L");
    require_finite(S, "S");
    const Eigen::Index n = A.rows();
    const Eigen::Index nu = S.rows();
    if (A.cols() != n || S.cols() != nu || B.rows() != n || L.cols() != nu || B.cols() != L.rows()) {
        throw Error("solve_sylvester: inconsistent dimensions");
    }

    const ComplexVector eig_a = raw_eigenvalues(A);
    const ComplexVector eig_s = raw_eigenvalues(S);
    const double tol = kSpectralTol * spectral_scale(eig_a, eig_s);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < nu; ++j) {
            if (std::abs(eig_a[i] - eig_s[j]) <= tol) {
                std::ostringstream msg;
                msg << "sigma(A) and sigma(S) overlap near " << eig_a[i];
                throw SpectraOverlap(msg.str());
            }
        }
    }

    // Vectorized form: (I (x) A - S^T (x) I) vec(X) = -vec(B*L).
    Matrix K = Matrix::Zero(n * nu, n * nu);
    for (Eigen::Index j = 0; j < nu; ++j) {
        K.block(j * n, j * n, n, n) = A;
        for (Eigen::Index i = 0; i < nu; ++i) {
            K.block(j * n, i * n, n, n).diagonal().array() -= S(i, j);
        }
    }
    const Matrix rhs_mat = -B * L;
    Eigen::Map<const ColVec> rhs(rhs_mat.data(), n * nu);
    ColVec x = K.partialPivLu().solve(rhs);
    Matrix X = Eigen::Map<Matrix>(x.data(), n, nu);

    const double residual = (A * X + B * L - X * S).norm();
    const double scale = A.norm() * X.norm() + B.norm() * L.norm();
    if (residual > 1e-10 * std::max(scale, 1e-300)) {
        throw ConvergenceFailure("Sylvester residual exceeds contract");
    }
    return X;
}

Eigendecomposition eigen_decompose(const Matrix& M) {
    require_finite(M, "M");
    if (M.rows() != M.cols()) throw Error("eigen_decompose: matrix must be square");
    Eigen::EigenSolver<Matrix> solver(M);
    if (solver.info() != Eigen::Success) {
        throw ConvergenceFailure("eigenvalue iteration did not converge");
    }
    const ComplexVector vals = solver.eigenvalues();
    const ComplexMatrix vecs = solver.eigenvectors();
    const Eigen::Index n = M.rows();

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return more_dominant(vals[a], vals[b]); });

    Eigendecomposition out;
    out.eigenvalues.resize(n);
    out.right.resize(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        out.eigenvalues[i] = vals[order[i]];
        out.right.col(i) = vecs.col(order[i]);
    }
    out.left = out.right.partialPivLu().inverse();
    return out;
}

Matrix observability_matrix(const Matrix& S, const Matrix& L) {
    const Eigen::Index nu = S.rows();
    Matrix O(nu, nu);
    RowVec row = L.row(0);
    for (Eigen::Index k = 0; k < nu; ++k) {
        O.row(k) = row;
        row = row * S;
    }
    return O;
}

bool is_observable(const Matrix& S, const Matrix& L) {
    const Eigen::Index nu = S.rows();
    if (L.rows() != 1 || L.cols() != nu) throw Error("is_observable: L must be 1 x nu");
    const Spectrum spec = cluster_spectrum(raw_eigenvalues(S));
    for (const Complex& lambda : spec.values) {
        ComplexMatrix pencil(nu + 1, nu);
        pencil.topRows(nu) = S.cast<Complex>();
        pencil.topRows(nu).diagonal().array() -= lambda;
        pencil.bottomRows(1) = L.cast<Complex>();
        Eigen::JacobiSVD<ComplexMatrix> svd(pencil);
        const auto& sv = svd.singularValues();
        if (sv(nu - 1) <= 1e-10 * std::max(sv(0), 1.0)) return false;
    }
    return true;
}

namespace {

// Monic polynomial with the given (conjugate-closed) roots, real coefficients,
// highest degree first.
std::vector<double> real_poly_from_roots(const std::vector<Complex>& roots) {
    std::vector<Complex> c{1.0};
    for (const Complex& r : roots) {
        std::vector<Complex> next(c.size() + 1, 0.0);
        for (std::size_t i = 0; i < c.size(); ++i) {
            next[i] += c[i];
            next[i + 1] -= c[i] * r;
        }
        c = std::move(next);
    }
    std::vector<double> out(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) out[i] = c[i].real();
    return out;
}

// Delta from the rational interpolation conditions L (S - mu I)^-1 Delta = 1,
// with derivative rows for repeated targets. Valid when no target lies in
// sigma(S).
ColVec place_by_interpolation(const Matrix& S, const RowVec& L, const Spectrum& targets) {
    const Eigen::Index nu = S.rows();
    Matrix Msys(nu, nu);
    ColVec rhs(nu);
    Eigen::Index row = 0;
    const ComplexMatrix Sc = S.cast<Complex>();
    for (std::size_t t = 0; t < targets.values.size(); ++t) {
        const Complex mu = targets.values[t];
        const int mult = targets.multiplicities[t];
        if (mu.imag() < 0) continue;  // conjugate handled by the +Im member
        const bool is_real = mu.imag() == 0.0;
        ComplexMatrix resolvent =
            (Sc - mu * ComplexMatrix::Identity(nu, nu)).partialPivLu().inverse();
        ComplexRowVec r = L.cast<Complex>() * resolvent;
        for (int j = 0; j < mult; ++j) {
            const double target_value = (j == 0) ? 1.0 : 0.0;
            if (is_real) {
                Msys.row(row) = r.real();
                rhs(row) = target_value;
                ++row;
            } else {
                Msys.row(row) = r.real();
                rhs(row) = target_value;
                ++row;
                Msys.row(row) = r.imag();
                rhs(row) = 0.0;
                ++row;
            }
            r = r * resolvent;
        }
    }
    if (row != nu) throw Error("pole_place_siso: internal row count mismatch");

    // Row equilibration keeps widely separated frequencies comparable.
    for (Eigen::Index k = 0; k < nu; ++k) {
        double norm = Msys.row(k).norm();
        if (norm > 0) {
            Msys.row(k) /= norm;
            rhs(k) /= norm;
        }
    }
    return Msys.colPivHouseholderQr().solve(rhs);
}

ColVec place_by_ackermann(const Matrix& S, const RowVec& L, const std::vector<Complex>& targets) {
    const Eigen::Index nu = S.rows();
    const std::vector<double> p = real_poly_from_roots(targets);
    Matrix pS = Matrix::Zero(nu, nu);
    for (double coeff : p) {
        pS = pS * S;
        pS.diagonal().array() += coeff;
    }
    const Matrix O = observability_matrix(S, Matrix(L));
    ColVec e_last = ColVec::Zero(nu);
    e_last(nu - 1) = 1.0;
    return pS * O.partialPivLu().solve(e_last);
}

double placement_error(const Matrix& S, const RowVec& L, const ColVec& delta,
                       const std::vector<Complex>& targets_sorted) {
    Eigen::EigenSolver<Matrix> solver(S - delta * L, false);
    if (solver.info() != Eigen::Success) return std::numeric_limits<double>::infinity();
    const ComplexVector eigs = solver.eigenvalues();
    const std::vector<int> match = match_to_targets(targets_sorted, eigs);
    double err = 0.0;
    for (std::size_t j = 0; j < targets_sorted.size(); ++j) {
        err = std::max(err, std::abs(eigs[match[j]] - targets_sorted[j]));
    }
    return err;
}

// Damped Gauss-Newton on the placed spectrum; the derivative of an eigenvalue
// in Delta is -(L v) w^T with w v = 1. Returns the achieved max error.
double newton_polish(const Matrix& S, const RowVec& L,
                     const std::vector<Complex>& targets_sorted, ColVec& delta, double tol,
                     int max_iters) {
    const Eigen::Index nu = S.rows();
    double err = placement_error(S, L, delta, targets_sorted);
    for (int iter = 0; iter < max_iters; ++iter) {
        if (err <= tol) break;
        Eigendecomposition ed;
        try {
            ed = eigen_decompose(S - delta * L);
        } catch (const Error&) {
            break;
        }
        const std::vector<int> match = match_to_targets(targets_sorted, ed.eigenvalues);
        Matrix Jac(nu, nu);
        ColVec res(nu);
        Eigen::Index row = 0;
        for (std::size_t j = 0; j < targets_sorted.size() && row < nu; ++j) {
            const Complex mu = targets_sorted[j];
            if (mu.imag() < 0) continue;
            const int i = match[j];
            const Complex lv = (L.cast<Complex>() * ed.right.col(i))(0);
            const ComplexRowVec grad = -lv * ed.left.row(i);
            const Complex r = mu - ed.eigenvalues[i];
            Jac.row(row) = grad.real();
            res(row) = r.real();
            ++row;
            if (mu.imag() > 0) {
                Jac.row(row) = grad.imag();
                res(row) = r.imag();
                ++row;
            }
        }
        const ColVec step = Jac.topRows(row)
                                .colPivHouseholderQr()
                                .solve(res.head(row));
        if (!step.allFinite()) break;
        double alpha = 1.0;
        bool improved = false;
        for (int halvings = 0; halvings < 8; ++halvings) {
            const ColVec trial = delta + alpha * step;
            const double trial_err = placement_error(S, L, trial, targets_sorted);
            if (trial_err < err) {
                delta = trial;
                err = trial_err;
                improved = true;
                break;
            }
            alpha *= 0.5;
        }
        if (!improved) break;
    }
    return err;
}

// Roots of a monic real polynomial (coefficients highest degree first,
// leading 1 omitted) via the balanced companion matrix, conjugate pairs
// symmetrized.
std::vector<Complex> roots_of_monic(const std::vector<double>& tail) {
    const int n = static_cast<int>(tail.size());
    Matrix companion = Matrix::Zero(n, n);
    for (int i = 0; i < n; ++i) companion(0, i) = -tail[i];
    for (int i = 1; i < n; ++i) companion(i, i - 1) = 1.0;
    Eigen::EigenSolver<Matrix> solver(companion, false);
    std::vector<Complex> roots(solver.eigenvalues().data(), solver.eigenvalues().data() + n);
    std::sort(roots.begin(), roots.end(), more_dominant);
    return roots;
}

}  // namespace

ColVec pole_place_siso(const Matrix& S, const Matrix& L, const std::vector<Complex>& targets) {
    require_finite(S, "S");
    require_finite(L, "L");
    const Eigen::Index nu = S.rows();
    if (L.rows() != 1 || L.cols() != nu || static_cast<Eigen::Index>(targets.size()) != nu) {
        throw Error("pole_place_siso: inconsistent dimensions");
    }
    double target_scale = 1.0;
    for (const Complex& t : targets) target_scale = std::max(target_scale, 1.0 + std::abs(t));
    if (!conjugate_closed(targets, kSpectralTol * target_scale)) {
        throw TargetsNotConjugateClosed("pole placement targets must come in conjugate pairs");
    }
    if (!is_observable(S, L)) {
        throw NotObservable("pole_place_siso: (S, L) is not observable");
    }

    const ComplexVector eig_s = raw_eigenvalues(S);
    ComplexVector targ(nu);
    for (Eigen::Index i = 0; i < nu; ++i) targ[i] = targets[i];
    const double tol = kSpectralTol * spectral_scale(eig_s, targ);

    bool targets_hit_spectrum = false;
    for (const Complex& t : targets) {
        for (Eigen::Index i = 0; i < nu; ++i) {
            if (std::abs(t - eig_s[i]) <= tol) targets_hit_spectrum = true;
        }
    }
    const Spectrum target_spec = cluster_spectrum(targ);
    const bool targets_simple =
        static_cast<Eigen::Index>(target_spec.values.size()) == nu;

    const RowVec Lrow = L.row(0);
    std::vector<Complex> sorted_targets = targets;
    std::sort(sorted_targets.begin(), sorted_targets.end(), more_dominant);
    const double polish_tol = 1e-10 * target_scale;

    ColVec delta = targets_hit_spectrum ? place_by_ackermann(S, Lrow, targets)
                                        : place_by_interpolation(S, Lrow, target_spec);
    double err = targets_simple ? newton_polish(S, Lrow, sorted_targets, delta, polish_tol, 40)
                                : placement_error(S, Lrow, delta, sorted_targets);

    if (targets_simple && err > polish_tol) {
        // Homotopy from sigma(S) to the targets along linearly interpolated
        // characteristic polynomial coefficients, Newton at every stage.
        const std::vector<double> from = real_poly_from_roots(
            std::vector<Complex>(eig_s.data(), eig_s.data() + nu));
        const std::vector<double> to = real_poly_from_roots(targets);
        ColVec d = ColVec::Zero(nu);
        double t = 0.0;
        double step = 0.5;
        bool ok = true;
        while (t < 1.0) {
            const double tn = std::min(1.0, t + step);
            std::vector<double> tail(nu);
            for (Eigen::Index i = 0; i < nu; ++i) {
                tail[i] = (1.0 - tn) * from[i + 1] + tn * to[i + 1];
            }
            const std::vector<Complex> mid =
                tn < 1.0 ? roots_of_monic(tail) : sorted_targets;
            ColVec trial = d;
            const double stage_tol = tn < 1.0 ? 1e-7 * target_scale : polish_tol;
            if (newton_polish(S, Lrow, mid, trial, stage_tol, 30) <= stage_tol) {
                d = trial;
                t = tn;
                step = std::min(0.5, 1.7 * step);
            } else {
                step *= 0.5;
                if (step < 1e-3) {
                    ok = false;
                    break;
                }
            }
        }
        if (ok) {
            const double homotopy_err = placement_error(S, Lrow, d, sorted_targets);
            if (homotopy_err < err) {
                delta = d;
                err = homotopy_err;
            }
        }
    }

    // Contract: the placed spectrum matches the request to 1e-6 absolute.
    if (err > 1e-6 * target_scale) {
        throw ConvergenceFailure(
            "pole placement did not reach the requested spectrum (clustered targets may be "
            "unresolvable at this scale in double precision)");
    }
    return delta;
}

double dual_norm_row(const RowVec& v) {
    if (!v.allFinite()) throw NonFinite("dual_norm_row: non-finite entries");
    return v.norm();
}

double dual_norm_row(const ComplexRowVec& v) {
    if (!v.allFinite()) throw NonFinite("dual_norm_row: non-finite entries");
    return v.norm();
}

bool is_non_derogatory(const Matrix& S) {
    require_finite(S, "S");
    if (S.rows() != S.cols()) throw Error("is_non_derogatory: matrix must be square");
    const Eigen::Index nu = S.rows();
    const Spectrum spec = cluster_spectrum(raw_eigenvalues(S));
    for (std::size_t i = 0; i < spec.values.size(); ++i) {
        if (spec.multiplicities[i] == 1) continue;  // geometric multiplicity is 1
        ComplexMatrix shifted = S.cast<Complex>();
        shifted.diagonal().array() -= spec.values[i];
        Eigen::JacobiSVD<ComplexMatrix> svd(shifted);
        const double cutoff = 1e-10 * std::max(svd.singularValues()(0), 1.0);
        Eigen::Index rank = 0;
        for (Eigen::Index k = 0; k < svd.singularValues().size(); ++k) {
            if (svd.singularValues()(k) > cutoff) ++rank;
        }
        if (nu - rank != 1) return false;
    }
    return true;
}

RealEigenbasis real_left_eigenbasis(const Matrix& M, int count) {
    require_finite(M, "M");
    const Eigen::Index n = M.rows();
    if (M.cols() != n) throw Error("real_left_eigenbasis: matrix must be square");
    if (count < 1 || count > n) throw Error("real_left_eigenbasis: count out of range");

    Eigendecomposition ed = eigen_decompose(M);
    double scale = 1.0;
    for (Eigen::Index i = 0; i < n; ++i) scale = std::max(scale, 1.0 + std::abs(ed.eigenvalues[i]));
    const double tol = kSpectralTol * scale;

    auto is_pair_start = [&](Eigen::Index i) {
        return i + 1 < n && ed.eigenvalues[i].imag() > tol &&
               std::abs(ed.eigenvalues[i + 1] - std::conj(ed.eigenvalues[i])) <= tol;
    };

    // The cut must not separate a conjugate pair.
    if (count < n) {
        const Complex last = ed.eigenvalues[count - 1];
        const Complex next = ed.eigenvalues[count];
        if (std::abs(next - std::conj(last)) <= tol && std::abs(last.imag()) > tol) {
            throw PairSplit("requested count cuts a conjugate pair");
        }
        if (std::abs(next - last) <= tol) {
            throw DegenerateEigenvalue("dominance ordering ambiguous at the cut");
        }
    }
    for (Eigen::Index i = 0; i + 1 < count; ++i) {
        if (std::abs(ed.eigenvalues[i] - ed.eigenvalues[i + 1]) <= tol) {
            throw DegenerateEigenvalue("selected eigenvalues are not simple");
        }
    }

    RealEigenbasis out;
    out.P = Matrix::Zero(count, n);
    out.F_block = Matrix::Zero(count, count);
    Eigen::Index row = 0;
    Eigen::Index i = 0;
    while (row < count) {
        if (is_pair_start(i)) {
            if (row + 1 >= count) throw PairSplit("requested count cuts a conjugate pair");
            ComplexRowVec w = ed.left.row(i);
            w /= w.norm();
            const double a = ed.eigenvalues[i].real();
            const double b = ed.eigenvalues[i].imag();
            out.P.row(row) = w.real();
            out.P.row(row + 1) = -w.imag();
            out.F_block(row, row) = a;
            out.F_block(row, row + 1) = b;
            out.F_block(row + 1, row) = -b;
            out.F_block(row + 1, row + 1) = a;
            row += 2;
            i += 2;
        } else {
            ComplexRowVec w = ed.left.row(i);
            w /= w.norm();
            if (w.real().norm() < w.imag().norm()) w *= Complex(0, 1);  // rotate to real
            out.P.row(row) = w.real();
            out.F_block(row, row) = ed.eigenvalues[i].real();
            row += 1;
            i += 1;
        }
    }

    const double residual = (out.P * M - out.F_block * out.P).norm();
    if (residual > 1e-8 * std::max(1.0, out.P.norm() * M.norm())) {
        throw ConvergenceFailure("left eigenbasis residual exceeds contract");
    }
    return out;
}

}  // namespace lsmm
