#include "lsmm/generator.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <sstream>

namespace lsmm {

namespace {

constexpr double kSqrt2 = 1.4142135623730951;

double points_scale(const std::vector<Complex>& pts) {
    double s = 1.0;
    for (const Complex& p : pts) s = std::max(s, 1.0 + std::abs(p));
    return s;
}

// Complex Jordan chain J_{s*} of the given size.
ComplexMatrix jordan_chain(const Complex& s, int size) {
    ComplexMatrix J = ComplexMatrix::Zero(size, size);
    J.diagonal().setConstant(s);
    for (int i = 0; i + 1 < size; ++i) J(i, i + 1) = 1.0;
    return J;
}

ComplexMatrix observability_complex(const ComplexMatrix& S, const ComplexRowVec& L) {
    const Eigen::Index nu = S.rows();
    ComplexMatrix O(nu, nu);
    ComplexRowVec row = L;
    for (Eigen::Index k = 0; k < nu; ++k) {
        O.row(k) = row;
        row = row * S;
    }
    return O;
}

}  // namespace

InterpolationSpec::InterpolationSpec(std::vector<Complex> points, std::vector<int> orders) {
    if (points.size() != orders.size() || points.empty()) {
        throw Error("interpolation spec: points and orders must be non-empty and same length");
    }
    for (const Complex& p : points) {
        if (!std::isfinite(p.real()) || !std::isfinite(p.imag())) {
            throw NonFinite("interpolation spec: non-finite point");
        }
    }
    for (int k : orders) {
        if (k < 0) throw Error("interpolation spec: negative order");
    }
    const double tol = kSpectralTol * points_scale(points);
    for (std::size_t i = 0; i < points.size(); ++i) {
        for (std::size_t j = i + 1; j < points.size(); ++j) {
            if (std::abs(points[i] - points[j]) <= tol) {
                throw NotConjugateClosed("interpolation points must be pairwise distinct");
            }
        }
    }

    std::vector<bool> visited(points.size(), false);
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (visited[i]) continue;
        visited[i] = true;
        if (std::abs(points[i].imag()) <= tol) {
            Group g{static_cast<int>(points_.size()), false, orders[i], orders[i] + 1};
            points_.push_back(Complex(points[i].real(), 0.0));
            orders_.push_back(orders[i]);
            groups_.push_back(g);
            continue;
        }
        std::size_t partner = points.size();
        for (std::size_t j = 0; j < points.size(); ++j) {
            if (!visited[j] && std::abs(points[j] - std::conj(points[i])) <= tol) {
                partner = j;
                break;
            }
        }
        if (partner == points.size()) {
            throw NotConjugateClosed("complex interpolation point lacks its conjugate");
        }
        if (orders[partner] != orders[i]) {
            throw NotConjugateClosed("conjugate points must carry equal orders");
        }
        visited[partner] = true;
        const Complex plus = points[i].imag() > 0 ? points[i] : points[partner];
        Group g{static_cast<int>(points_.size()), true, orders[i], 2 * (orders[i] + 1)};
        points_.push_back(plus);
        points_.push_back(std::conj(plus));
        orders_.push_back(orders[i]);
        orders_.push_back(orders[i]);
        groups_.push_back(g);
    }
    nu_ = 0;
    for (int k : orders_) nu_ += k + 1;
}

InterpolationSpec InterpolationSpec::from_frequencies(const std::vector<double>& freqs, int order) {
    std::vector<Complex> pts;
    std::vector<int> ords;
    for (double f : freqs) {
        if (f == 0.0) {
            pts.emplace_back(0.0, 0.0);
            ords.push_back(order);
        } else {
            pts.emplace_back(0.0, std::abs(f));
            pts.emplace_back(0.0, -std::abs(f));
            ords.push_back(order);
            ords.push_back(order);
        }
    }
    return InterpolationSpec(std::move(pts), std::move(ords));
}

SignalGenerator build_generator(const InterpolationSpec& spec) {
    const int nu = spec.nu();
    Matrix S = Matrix::Zero(nu, nu);
    int pos = 0;
    for (const auto& g : spec.groups()) {
        const int k = g.order;
        if (!g.is_pair) {
            const double s = spec.points()[g.first].real();
            for (int j = 0; j <= k; ++j) {
                S(pos + j, pos + j) = s;
                if (j < k) S(pos + j, pos + j + 1) = 1.0;
            }
        } else {
            const double a = spec.points()[g.first].real();
            const double b = spec.points()[g.first].imag();
            for (int j = 0; j <= k; ++j) {
                const int p = pos + 2 * j;
                S(p, p) = a;
                S(p, p + 1) = b;
                S(p + 1, p) = -b;
                S(p + 1, p + 1) = a;
                if (j < k) {
                    S(p, p + 2) = 1.0;
                    S(p + 1, p + 3) = 1.0;
                }
            }
        }
        pos += g.block_size;
    }

    SignalGenerator gen;
    gen.S = S;
    gen.L = Matrix::Constant(1, nu, 1.0 / std::sqrt(static_cast<double>(nu)));
    gen.omega0 = gen.L.transpose();
    gen.spec = spec;
    if (!is_observable(gen.S, gen.L)) {
        throw NotObservable("build_generator: (S, L) is not observable");
    }
    return gen;
}

namespace {

struct ChainLayout {
    int position;  // first row/column of the group in the real matrices
    bool is_pair;
    int chain_len;  // k + 1
    Complex point;  // +Im member for pairs
};

// Realifies the columns of a complex similarity whose pair groups carry
// exactly conjugate chains. The result differs from Tc by a right unitary
// factor, so T*T^T == Tc*Tc^H.
Matrix realify_similarity(const ComplexMatrix& Tc, const std::vector<ChainLayout>& layout) {
    const Eigen::Index nu = Tc.rows();
    Matrix T(nu, nu);
    for (const auto& g : layout) {
        if (!g.is_pair) {
            for (int j = 0; j < g.chain_len; ++j) {
                T.col(g.position + j) = Tc.col(g.position + j).real();
            }
        } else {
            for (int j = 0; j < g.chain_len; ++j) {
                const ComplexVector t = Tc.col(g.position + j);
                T.col(g.position + 2 * j) = kSqrt2 * t.real();
                T.col(g.position + 2 * j + 1) = -kSqrt2 * t.imag();
            }
        }
    }
    return T;
}

CanonicalForm assemble_canonical(const Matrix& S, const Matrix& L,
                                 const std::vector<ChainLayout>& layout, bool per_block) {
    const Eigen::Index nu = S.rows();
    ComplexMatrix J = ComplexMatrix::Zero(nu, nu);
    ComplexRowVec Lambda = ComplexRowVec::Zero(nu);
    {
        int jpos = 0;
        for (const auto& g : layout) {
            J.block(jpos, jpos, g.chain_len, g.chain_len) = jordan_chain(g.point, g.chain_len);
            Lambda(jpos) = 1.0;
            jpos += g.chain_len;
            if (g.is_pair) {
                J.block(jpos, jpos, g.chain_len, g.chain_len) =
                    jordan_chain(std::conj(g.point), g.chain_len);
                Lambda(jpos) = 1.0;
                jpos += g.chain_len;
            }
        }
    }

    ComplexMatrix Tc = ComplexMatrix::Zero(nu, nu);
    if (per_block) {
        // Solving per block keeps the conditioning local to one frequency
        // scale; the global observability matrix mixes all scales.
        int jpos = 0;
        for (const auto& g : layout) {
            const int m = g.is_pair ? 2 * g.chain_len : g.chain_len;
            const Matrix Sb = S.block(g.position, g.position, m, m);
            const Matrix Lb = L.block(0, g.position, 1, m);
            if (!is_observable(Sb, Lb)) {
                throw NotObservable("build_canonical_T: generator block not observable");
            }
            const ComplexMatrix Ob = observability_complex(Sb.cast<Complex>(), Lb.row(0).cast<Complex>());
            const ComplexMatrix Oj =
                observability_complex(J.block(jpos, jpos, m, m), Lambda.segment(jpos, m));
            Tc.block(g.position, g.position, m, m) = Ob.partialPivLu().solve(Oj);
            jpos += m;
        }
    } else {
        if (!is_observable(S, L)) {
            throw NotObservable("build_canonical_T: (S, L) is not observable");
        }
        const ComplexMatrix Os = observability_matrix(S, L).cast<Complex>();
        const ComplexMatrix Oj = observability_complex(J, Lambda);
        Tc = Os.partialPivLu().solve(Oj);
    }

    CanonicalForm cf;
    cf.J = J;
    cf.Lambda = Lambda;
    cf.Tc = Tc;
    cf.T = realify_similarity(Tc, layout);

    const double res1 = (S.cast<Complex>() * Tc - Tc * J).norm();
    const double scale1 = std::max(1.0, S.norm() * Tc.norm() + Tc.norm() * J.norm());
    const double res2 = (L.row(0).cast<Complex>() * Tc - Lambda).norm();
    const double scale2 = std::max(1.0, L.norm() * Tc.norm());
    if (res1 > 1e-9 * scale1 || res2 > 1e-9 * scale2) {
        throw ConvergenceFailure("canonical similarity residual exceeds contract");
    }
    return cf;
}

}  // namespace

CanonicalForm build_canonical_T(const SignalGenerator& gen) {
    std::vector<ChainLayout> layout;
    if (gen.spec.has_value()) {
        int pos = 0;
        for (const auto& g : gen.spec->groups()) {
            layout.push_back({pos, g.is_pair, g.order + 1, gen.spec->points()[g.first]});
            pos += g.block_size;
        }
        return assemble_canonical(gen.S, gen.L, layout, /*per_block=*/true);
    }

    // No block structure known: infer one chain per distinct eigenvalue.
    if (!is_non_derogatory(gen.S)) {
        throw Error("build_canonical_T: S must be non-derogatory");
    }
    Eigen::EigenSolver<Matrix> solver(gen.S, false);
    if (solver.info() != Eigen::Success) throw ConvergenceFailure("eigenvalue iteration failed");
    const Spectrum spec = cluster_spectrum(solver.eigenvalues());
    const double tol = kSpectralTol * points_scale(spec.values);
    std::vector<bool> used(spec.values.size(), false);
    int pos = 0;
    for (std::size_t i = 0; i < spec.values.size(); ++i) {
        if (used[i]) continue;
        used[i] = true;
        const Complex v = spec.values[i];
        if (std::abs(v.imag()) <= tol) {
            layout.push_back({pos, false, spec.multiplicities[i], Complex(v.real(), 0.0)});
            pos += spec.multiplicities[i];
        } else {
            std::size_t partner = spec.values.size();
            for (std::size_t j = 0; j < spec.values.size(); ++j) {
                if (!used[j] && std::abs(spec.values[j] - std::conj(v)) <= tol) partner = j;
            }
            if (partner == spec.values.size() || spec.multiplicities[partner] != spec.multiplicities[i]) {
                throw NotConjugateClosed("spectrum of S is not conjugate closed");
            }
            used[partner] = true;
            const Complex plus = v.imag() > 0 ? v : std::conj(v);
            layout.push_back({pos, true, spec.multiplicities[i], plus});
            pos += 2 * spec.multiplicities[i];
        }
    }
    return assemble_canonical(gen.S, gen.L, layout, /*per_block=*/false);
}

Spectrum spectrum_k(const Spectrum& s_spec, int k) {
    if (k < 1) throw Error("spectrum_k: k must be >= 1");
    std::vector<Complex> sums;
    const std::size_t d = s_spec.values.size();
    std::vector<int> counts(d, 0);
    // Enumerate all compositions of k over the distinct eigenvalues.
    auto recurse = [&](auto&& self, std::size_t idx, int remaining, Complex partial) -> void {
        if (idx + 1 == d) {
            sums.push_back(partial + static_cast<double>(remaining) * s_spec.values[idx]);
            return;
        }
        for (int c = 0; c <= remaining; ++c) {
            self(self, idx + 1, remaining - c, partial + static_cast<double>(c) * s_spec.values[idx]);
        }
    };
    if (d == 0) return Spectrum{};
    recurse(recurse, 0, k, Complex(0, 0));

    ComplexVector v(static_cast<Eigen::Index>(sums.size()));
    for (std::size_t i = 0; i < sums.size(); ++i) v[static_cast<Eigen::Index>(i)] = sums[i];
    Spectrum out = cluster_spectrum(v);
    std::fill(out.multiplicities.begin(), out.multiplicities.end(), 1);
    return out;
}

bool check_nonresonance(const Spectrum& a_spec, const Spectrum& s_spec, int k_max) {
    if (k_max < 1) throw Error("check_nonresonance: k_max must be >= 1");
    for (int k = 1; k <= k_max; ++k) {
        if (!spectra_disjoint(a_spec, spectrum_k(s_spec, k))) return false;
    }
    return true;
}

Matrix kernel_basis(const Matrix& M) {
    Eigen::JacobiSVD<Matrix> svd(M, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double cutoff = sv.size() > 0 ? 1e-10 * std::max(sv(0), 1e-300) : 0.0;
    Eigen::Index rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
        if (sv(i) > cutoff) ++rank;
    }
    return svd.matrixV().rightCols(M.cols() - rank);
}

namespace {

void require_full_row_rank(const Matrix& P) {
    Eigen::ColPivHouseholderQR<Matrix> qr(P);
    qr.setThreshold(1e-10);
    if (qr.rank() < P.rows()) {
        throw RankDeficient("P must have full row rank");
    }
}

}  // namespace

bool check_conditioned_invariant(const Matrix& P, const Matrix& S, const Matrix& L) {
    require_full_row_rank(P);
    Matrix stacked(P.rows() + 1, P.cols());
    stacked.topRows(P.rows()) = P;
    stacked.bottomRows(1) = L;
    const Matrix K = kernel_basis(stacked);
    if (K.cols() == 0) return true;
    const double residual = (P * S * K).norm();
    return residual <= kSubspaceTol * std::max(1.0, P.norm() * S.norm());
}

bool check_invariant_under(const Matrix& P, const Matrix& M) {
    require_full_row_rank(P);
    const Matrix K = kernel_basis(P);
    if (K.cols() == 0) return true;
    const double residual = (P * M * K).norm();
    return residual <= kSubspaceTol * std::max(1.0, P.norm() * M.norm());
}

}  // namespace lsmm
