#include "lsmm/reduction.hpp"

#include <Eigen/LU>
#include <Eigen/QR>
#include <Eigen/SVD>
#include <cmath>
#include <cstdlib>
#include <sstream>

namespace lsmm {

namespace {

void log_warn(const std::string& msg) {
    if (std::getenv("LSMM_LOG") != nullptr) {
        std::fprintf(stderr, "[lsmm] warning: %s\n", msg.c_str());
    }
}

int rank_of(const Matrix& M, double threshold = 1e-10) {
    Eigen::ColPivHouseholderQR<Matrix> qr(M);
    qr.setThreshold(threshold);
    return static_cast<int>(qr.rank());
}

}  // namespace

void StateSpace::validate() const {
    const Eigen::Index n = A.rows();
    if (A.cols() != n || B.rows() != n || B.cols() != 1 || C.rows() != 1 || C.cols() != n) {
        throw Error("state space: inconsistent dimensions");
    }
    if (!A.allFinite() || !B.allFinite() || !C.allFinite()) {
        throw NonFinite("state space: non-finite entries");
    }
}

MomentSet moments_closed_form(const StateSpace& sys, const InterpolationSpec& spec) {
    sys.validate();
    const Eigen::Index n = sys.A.rows();
    Eigen::EigenSolver<Matrix> solver(sys.A, false);
    if (solver.info() != Eigen::Success) throw ConvergenceFailure("eigenvalue iteration failed");
    const ComplexVector eig_a = solver.eigenvalues();
    double scale = 1.0;
    for (Eigen::Index i = 0; i < n; ++i) scale = std::max(scale, 1.0 + std::abs(eig_a[i]));

    MomentSet out{{}, spec};
    const ComplexMatrix Ac = sys.A.cast<Complex>();
    const ComplexVector Bc = sys.B.col(0).cast<Complex>();
    const ComplexRowVec Cc = sys.C.row(0).cast<Complex>();
    for (std::size_t i = 0; i < spec.points().size(); ++i) {
        const Complex s = spec.points()[i];
        for (Eigen::Index j = 0; j < n; ++j) {
            if (std::abs(s - eig_a[j]) <= kSpectralTol * scale) {
                std::ostringstream msg;
                msg << "interpolation point " << s << " lies in sigma(A)";
                throw PointInSpectrum(msg.str());
            }
        }
        Eigen::PartialPivLU<ComplexMatrix> lu(s * ComplexMatrix::Identity(n, n) - Ac);
        ComplexVector x = lu.solve(Bc);
        for (int k = 0; k <= spec.orders()[i]; ++k) {
            out.values.push_back((Cc * x)(0));
            x = lu.solve(x);
        }
    }
    return out;
}

Matrix solve_pi(const StateSpace& sys, const SignalGenerator& gen) {
    sys.validate();
    return solve_sylvester(sys.A, sys.B, gen.L, gen.S);
}

double index_J(const StateSpace& sys, const ReducedModel& model, const SignalGenerator& gen,
               const Matrix& T) {
    const Matrix Pi = solve_sylvester(sys.A, sys.B, gen.L, gen.S);
    const Matrix P = solve_sylvester(model.F, model.G, gen.L, gen.S);
    const RowVec row = (sys.C * Pi - model.H * P) * T;
    return row.squaredNorm();
}

Matrix derive_Q(const Matrix& P, const Matrix& T) {
    const Eigen::Index r = P.rows();
    const Eigen::Index nu = P.cols();
    if (T.rows() != nu || T.cols() != nu) throw Error("derive_Q: T must be nu x nu");
    if (rank_of(P) < r) throw RankDeficient("derive_Q: P must have full row rank");
    if (rank_of(T) < nu) throw RankDeficient("derive_Q: T must be invertible");

    const Matrix M = T * T.transpose();
    const Matrix G = P * M * P.transpose();
    const Matrix Q = M * P.transpose() * G.partialPivLu().inverse();
    const double residual = (P * Q - Matrix::Identity(r, r)).norm();
    if (residual > 1e-10 * std::sqrt(static_cast<double>(r))) {
        throw RankDeficient("derive_Q: P T T^T P^T is numerically singular");
    }
    return Q;
}

ReducedModel assemble_family(const StateSpace& sys, const SignalGenerator& gen,
                             const ReductionParams& params) {
    sys.validate();
    const Eigen::Index nu = gen.S.rows();
    const Eigen::Index r = params.P.rows();
    if (params.P.cols() != nu || params.Delta.rows() != nu || params.Delta.cols() != 1 ||
        params.T.rows() != nu || params.T.cols() != nu || params.Q.rows() != nu ||
        params.Q.cols() != r) {
        throw Error("assemble_family: inconsistent parameter dimensions");
    }

    std::vector<std::string> violated;
    std::ostringstream detail;
    const bool full_rank = rank_of(params.P) == r;
    if (!full_rank) {
        violated.emplace_back("A_P");
        detail << "P is rank deficient; ";
    } else {
        if (!check_conditioned_invariant(params.P, gen.S, gen.L)) {
            violated.emplace_back("A_P");
            detail << "ker P is not (S, L) conditioned invariant; ";
        }
        const Matrix SDL = gen.S - params.Delta * gen.L;
        if (!check_invariant_under(params.P, SDL)) {
            violated.emplace_back("A_Delta");
            detail << "ker P is not (S - Delta L)-invariant; ";
        }
        const Matrix Qf = derive_Q(params.P, params.T);
        if ((params.Q - Qf).norm() > 1e-8 * std::max(1.0, Qf.norm())) {
            violated.emplace_back("A_Q");
            detail << "Q does not match the T-weighted right inverse of P; ";
        }
        const Matrix F = params.P * SDL * params.Q;
        Eigen::EigenSolver<Matrix> ef(F, false);
        Eigen::EigenSolver<Matrix> es(gen.S, false);
        if (!spectra_disjoint(cluster_spectrum(ef.eigenvalues()), cluster_spectrum(es.eigenvalues()))) {
            violated.emplace_back("A_Delta");
            detail << "sigma(P (S - Delta L) Q) meets sigma(S); ";
        }
    }
    if (!violated.empty()) {
        std::string which;
        for (std::size_t i = 0; i < violated.size(); ++i) {
            which += violated[i];
            if (i + 1 < violated.size()) which += ",";
        }
        throw NotAdmissible(which, detail.str());
    }

    const Matrix Pi = solve_pi(sys, gen);
    ReducedModel model;
    model.F = params.P * (gen.S - params.Delta * gen.L) * params.Q;
    model.G = params.P * params.Delta;
    model.H = sys.C * Pi * params.Q;
    model.provenance = params;
    model.spectra_disjoint_from_generator = true;
    return model;
}

ReducedModel solve_relaxed(const StateSpace& sys, const SignalGenerator& gen, const Matrix& P,
                           const Matrix& T) {
    sys.validate();
    const Eigen::Index r = P.rows();
    const Eigen::Index nu = P.cols();
    if (rank_of(P) < r) throw RankDeficient("solve_relaxed: P must have full row rank");

    const Matrix Pi = solve_pi(sys, gen);
    const Matrix Q = derive_Q(P, T);
    const Matrix H = sys.C * Pi * Q;

    ReducedModel model;
    model.H = H;
    if (r == nu) {
        // Full order: the constraint leaves the whole gain Delta free, and
        // the minimum-norm solution lands on sigma(F) = sigma(S). Resolve the
        // gauge by placing the surrogate spectrum at stable values clear of
        // sigma(S).
        const double base = 1.0 + gen.S.cwiseAbs().rowwise().sum().maxCoeff();
        std::vector<Complex> targets;
        Eigen::EigenSolver<Matrix> es(gen.S, false);
        const Spectrum spec_s = cluster_spectrum(es.eigenvalues());
        double stretch = 1.0;
        for (int attempt = 0; attempt < 5; ++attempt) {
            targets.clear();
            for (Eigen::Index k = 0; k < nu; ++k) {
                targets.emplace_back(-stretch * base * (1.0 + static_cast<double>(k) / nu), 0.0);
            }
            ComplexVector tv(nu);
            for (Eigen::Index k = 0; k < nu; ++k) tv[k] = targets[k];
            if (spectra_disjoint(cluster_spectrum(tv), spec_s)) break;
            stretch *= 1.31;
        }
        const ColVec delta = pole_place_siso(gen.S, gen.L, targets);
        model.F = P * (gen.S - delta * gen.L) * Q;
        model.G = P * delta;
    } else {
        // F P + G L = P S has a unique exact solution when [P; L] has full
        // row rank; the unknowns are the rows of [F G].
        Matrix stacked(r + 1, nu);
        stacked.topRows(r) = P;
        stacked.bottomRows(1) = gen.L;
        const Matrix rhs = P * gen.S;
        const Matrix FG = stacked.transpose()
                              .colPivHouseholderQr()
                              .solve(rhs.transpose())
                              .transpose();
        const double residual = (FG * stacked - rhs).norm();
        if (residual > 1e-8 * std::max(1.0, rhs.norm())) {
            throw NotConditionedInvariant(
                "solve_relaxed: F P + G L = P S has no exact solution (ker P is not (S, L) "
                "conditioned invariant)");
        }
        model.F = FG.leftCols(r);
        model.G = FG.rightCols(1);
    }

    Eigen::EigenSolver<Matrix> ef(model.F, false);
    Eigen::EigenSolver<Matrix> es(gen.S, false);
    model.spectra_disjoint_from_generator =
        spectra_disjoint(cluster_spectrum(ef.eigenvalues()), cluster_spectrum(es.eigenvalues()));
    if (!model.spectra_disjoint_from_generator) {
        log_warn("solve_relaxed: sigma(F) meets sigma(S) a posteriori");
    }
    return model;
}

double error_bound(const StateSpace& sys, const ReducedModel& model, const SignalGenerator& gen) {
    const Matrix Pi = solve_sylvester(sys.A, sys.B, gen.L, gen.S);
    const Matrix P = solve_sylvester(model.F, model.G, gen.L, gen.S);
    return dual_norm_row(RowVec(sys.C * Pi - model.H * P));
}

std::vector<Complex> dominant_eigenvalues(const Matrix& A, int count) {
    Eigendecomposition ed = eigen_decompose(A);
    const Eigen::Index n = A.rows();
    if (count < 1 || count > n) throw Error("dominant_eigenvalues: count out of range");
    double scale = 1.0;
    for (Eigen::Index i = 0; i < n; ++i) scale = std::max(scale, 1.0 + std::abs(ed.eigenvalues[i]));
    const double tol = kSpectralTol * scale;
    if (count < n) {
        const Complex last = ed.eigenvalues[count - 1];
        const Complex next = ed.eigenvalues[count];
        if (std::abs(next - std::conj(last)) <= tol && std::abs(last.imag()) > tol) {
            throw PairSplit("dominant eigenvalue cut splits a conjugate pair");
        }
        if (std::abs(next - last) <= tol) {
            throw DegenerateEigenvalue("dominance ordering ambiguous at the cut");
        }
    }
    std::vector<Complex> out(ed.eigenvalues.data(), ed.eigenvalues.data() + count);
    return out;
}

namespace {

// Basis of the left invariant subspace of S - Delta L for placed eigenvalues,
// in divided-difference (Newton) form. The prefix rows w_k = L prod_{i<=k}
// (S - mu_i I)^-1 over the dominance-ordered node sequence span the subspace
// and stay well conditioned where per-eigenvalue rows collapse onto each
// other (clustered mu). Delta enters only through the interpolation
// conditions w_k Delta = [k == 1]; the span itself is Delta-free.
//
// Conjugate pairs are walked as one group: the two basis directions a pair
// adds are Re/Im of the row at its first node, and the running product picks
// up the real quadratic factor (S^2 - 2 Re(mu) S + |mu|^2 I)^-1.
struct ResolventBasis {
    Matrix P;               // r x nu, orthonormal rows
    Matrix constraint;      // interpolation-condition rows (may exceed r)
    ColVec constraint_rhs;
};

ResolventBasis resolvent_left_basis(const Matrix& S, const Matrix& L,
                                    const std::vector<Complex>& values) {
    const Eigen::Index nu = S.rows();
    const Eigen::Index r = static_cast<Eigen::Index>(values.size());

    Matrix basis(r, nu);
    std::vector<RowVec> constraint_rows;
    std::vector<double> constraint_rhs;
    RowVec prefix = L.row(0);  // L times the running real resolvent product
    Eigen::Index row = 0;
    bool first_node = true;
    std::size_t i = 0;
    while (i < values.size()) {
        const Complex mu = values[i];
        if (mu.imag() == 0.0) {
            const Matrix shifted = S - mu.real() * Matrix::Identity(nu, nu);
            prefix = shifted.transpose().partialPivLu().solve(prefix.transpose()).transpose();
            basis.row(row++) = prefix;
            constraint_rows.push_back(prefix);
            constraint_rhs.push_back(first_node ? 1.0 : 0.0);
            first_node = false;
            i += 1;
        } else {
            if (i + 1 >= values.size() ||
                std::abs(values[i + 1] - std::conj(mu)) >
                    kSpectralTol * (1.0 + std::abs(mu))) {
                throw Error("resolvent_left_basis: values must be conjugate closed, pairs adjacent");
            }
            const ComplexMatrix shifted =
                S.cast<Complex>() - mu * ComplexMatrix::Identity(nu, nu);
            const ComplexRowVec w = shifted.transpose()
                                        .partialPivLu()
                                        .solve(prefix.cast<Complex>().transpose())
                                        .transpose();
            basis.row(row++) = w.real();
            basis.row(row++) = w.imag();
            constraint_rows.push_back(w.real());
            constraint_rhs.push_back(first_node ? 1.0 : 0.0);
            constraint_rows.push_back(w.imag());
            constraint_rhs.push_back(0.0);
            first_node = false;
            // real quadratic factor of the pair
            const Matrix quad = S * S - 2.0 * mu.real() * S +
                                std::norm(mu) * Matrix::Identity(nu, nu);
            prefix = quad.transpose().partialPivLu().solve(prefix.transpose()).transpose();
            constraint_rows.push_back(prefix);
            constraint_rhs.push_back(0.0);
            i += 2;
        }
    }
    if (row != r) throw Error("resolvent_left_basis: internal row count mismatch");

    ResolventBasis out;
    out.constraint.resize(static_cast<Eigen::Index>(constraint_rows.size()), nu);
    out.constraint_rhs.resize(static_cast<Eigen::Index>(constraint_rows.size()));
    for (std::size_t k = 0; k < constraint_rows.size(); ++k) {
        const double scale = std::max(constraint_rows[k].norm(), 1e-300);
        out.constraint.row(static_cast<Eigen::Index>(k)) = constraint_rows[k] / scale;
        out.constraint_rhs(static_cast<Eigen::Index>(k)) = constraint_rhs[k] / scale;
    }
    for (Eigen::Index k = 0; k < r; ++k) basis.row(k) /= std::max(basis.row(k).norm(), 1e-300);
    Eigen::HouseholderQR<Matrix> qr(basis.transpose());
    const Matrix thin_q = qr.householderQ() * Matrix::Identity(nu, r);
    out.P = thin_q.transpose();
    return out;
}

}  // namespace

ReductionParams dominant_projection_params(const Matrix& A, const SignalGenerator& gen,
                                           const CanonicalForm& canon, int r) {
    const int nu = gen.nu();
    if (r < 1 || r > nu) throw Error("dominant_projection_params: r out of range");
    const std::vector<Complex> targets = dominant_eigenvalues(A, nu);

    Matrix P;
    ColVec delta;
    bool two_step_done = false;
    try {
        // Two-step route: place the full surrogate spectrum, then take the
        // dominant left eigenbasis.
        delta = pole_place_siso(gen.S, gen.L, targets);
        const RealEigenbasis basis = real_left_eigenbasis(gen.S - delta * gen.L, r);
        P = basis.P;
        two_step_done = true;
    } catch (const ConvergenceFailure&) {
    } catch (const DegenerateEigenvalue&) {
    }
    if (!two_step_done) {
        // Clustered targets cannot be resolved through sigma(S - Delta L) in
        // double precision. Build the r dominant rows directly in
        // divided-difference resolvent form and pick the minimum-norm Delta
        // meeting just those interpolation conditions; the family member is
        // unchanged because the row space of P does not depend on Delta.
        log_warn("dominant_projection_params: falling back to the resolvent construction");
        const std::vector<Complex> kept = dominant_eigenvalues(A, r);
        const ResolventBasis basis = resolvent_left_basis(gen.S, gen.L, kept);
        delta = basis.constraint.completeOrthogonalDecomposition().solve(basis.constraint_rhs);
        P = basis.P;
    }

    const Matrix Q = derive_Q(P, canon.T);
    return ReductionParams{P, Matrix(delta), canon.T, Q};
}

std::pair<ReducedModel, ReductionParams> dominant_reduction_pipeline(const StateSpace& sys,
                                                                     const InterpolationSpec& spec,
                                                                     int r) {
    sys.validate();
    const int nu = spec.nu();
    const int n = sys.order();
    if (!(n >= nu && nu >= 2 * r)) {
        log_warn("dominant_reduction_pipeline: n >= nu >= 2r does not hold");
    }

    SignalGenerator gen = build_generator(spec);
    const CanonicalForm canon = build_canonical_T(gen);
    ReductionParams params = dominant_projection_params(sys.A, gen, canon, r);
    ReducedModel model = assemble_family(sys, gen, params);
    return {std::move(model), std::move(params)};
}

ReducedModel surrogate_model(const StateSpace& sys, const SignalGenerator& gen,
                             const Matrix& Delta) {
    sys.validate();
    const Matrix Pi = solve_pi(sys, gen);
    const Matrix F = gen.S - Delta * gen.L;
    Eigen::EigenSolver<Matrix> ef(F, false);
    Eigen::EigenSolver<Matrix> es(gen.S, false);
    if (!spectra_disjoint(cluster_spectrum(ef.eigenvalues()), cluster_spectrum(es.eigenvalues()))) {
        throw SpectraOverlap("surrogate_model: sigma(S - Delta L) meets sigma(S)");
    }
    ReducedModel model;
    model.F = F;
    model.G = Delta;
    model.H = sys.C * Pi;
    return model;
}

SignalGenerator surrogate_generator(const SignalGenerator& gen, const Matrix& P, const Matrix& Q) {
    const Eigen::Index r = P.rows();
    if ((P * Q - Matrix::Identity(r, r)).norm() > 1e-10 * std::sqrt(static_cast<double>(r))) {
        throw RankDeficient("surrogate_generator: P Q != I");
    }
    SignalGenerator out;
    out.S = P * gen.S * Q;
    out.L = gen.L * Q;
    out.omega0 = P * gen.omega0;
    out.spec = std::nullopt;
    return out;
}

bool is_controllable(const Matrix& F, const Matrix& G) {
    const Eigen::Index r = F.rows();
    Eigen::EigenSolver<Matrix> solver(F, false);
    if (solver.info() != Eigen::Success) throw ConvergenceFailure("eigenvalue iteration failed");
    const ComplexVector eigs = solver.eigenvalues();
    const double scale = std::max(1.0, F.norm() + G.norm());
    for (Eigen::Index i = 0; i < r; ++i) {
        ComplexMatrix pencil(r, r + G.cols());
        pencil.leftCols(r) = eigs[i] * ComplexMatrix::Identity(r, r) - F.cast<Complex>();
        pencil.rightCols(G.cols()) = G.cast<Complex>();
        Eigen::JacobiSVD<ComplexMatrix> svd(pencil);
        if (svd.singularValues()(r - 1) <= 1e-8 * scale) return false;
    }
    return true;
}

}  // namespace lsmm
