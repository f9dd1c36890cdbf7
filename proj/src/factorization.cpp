#include "wrflow/factorization.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <sstream>

namespace wrflow {

namespace {

void require_order(const PsdOperator& lo, const PsdOperator& hi, const char* where) {
    const LoewnerResult cmp = loewner_leq(lo.matrix(), hi.matrix(), 1e-9);
    if (!cmp.holds) {
        std::ostringstream os;
        os << where << ": OrderViolation, lambda_min(hi - lo) = " << cmp.margin;
        throw OrderViolation(os.str());
    }
}

// Spectral clamp for differences of near-equal operators: negative
// eigenvalues at the certification-noise level are flattened to zero and
// the discrepancy shows up in the localization residual instead.
PsdOperator clamp_psd(const Eigen::MatrixXd& m) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
    const Eigen::VectorXd lam = es.eigenvalues().cwiseMax(0.0);
    return PsdOperator(SymmetricMatrix(symmetrize(
        es.eigenvectors() * lam.asDiagonal() * es.eigenvectors().transpose())));
}

Subspace support_subspace(const PsdOperator& r0, double rank_tol) {
    const int d = r0.dim();
    const double cutoff = rank_tol * r0.lambda_max();
    int hdim = 0;
    for (int i = 0; i < d; ++i) {
        if (r0.eigenvalues()(i) > cutoff && r0.eigenvalues()(i) > 0.0) ++hdim;
    }
    return Subspace(d, r0.eigenvectors().leftCols(hdim));
}

} // namespace

DouglasFactor douglas_factor(const PsdOperator& a, const PsdOperator& b, double rank_tol) {
    if (a.dim() != b.dim()) {
        throw DimensionMismatch("douglas_factor: dimension mismatch");
    }
    require_order(a, b, "douglas_factor");
    const Eigen::MatrixXd root_a = psd_sqrt(a).mat();
    const SymmetricMatrix root_b_pinv = pinv_sqrt(b, rank_tol);
    Eigen::MatrixXd x = root_a * root_b_pinv.mat();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(x);
    const double norm = svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
    return {x, norm};
}

IntrinsicContraction intrinsic_contraction(const PsdOperator& r, const PsdOperator& r0,
                                           double rank_tol) {
    if (r.dim() != r0.dim()) {
        throw DimensionMismatch("intrinsic_contraction: dimension mismatch");
    }
    require_order(r, r0, "intrinsic_contraction");
    const SymmetricMatrix root_pinv = pinv_sqrt(r0, rank_tol);
    const Eigen::MatrixXd t =
        symmetrize(root_pinv.mat() * r.mat() * root_pinv.mat());
    return {SymmetricMatrix(t), support_subspace(r0, rank_tol)};
}

IntrinsicContraction psi_map(const IntrinsicContraction& t, const Projection& p,
                             const PsdOperator& r0) {
    if (t.t.dim() != r0.dim() || p.dim() != r0.dim()) {
        throw DimensionMismatch("psi_map: dimension mismatch");
    }
    const Eigen::MatrixXd root = psd_sqrt(r0).mat();
    const PsdOperator r(symmetrize(root * t.t.mat() * root), 1e-8);
    const PsdOperator r_next = residual_map(r, p);
    const SymmetricMatrix root_pinv = pinv_sqrt(r0);
    const Eigen::MatrixXd t_next =
        symmetrize(root_pinv.mat() * r_next.mat() * root_pinv.mat());
    return {SymmetricMatrix(t_next), t.h_r0};
}

IntrinsicContraction run_intrinsic_flow(const PsdOperator& r0, const Projection& pa,
                                        const Projection& pb, const FlowConfig& cfg) {
    if (r0.dim() != pa.dim() || r0.dim() != pb.dim()) {
        throw DimensionMismatch("run_intrinsic_flow: dimension mismatch");
    }
    const Subspace h = support_subspace(r0, kRankTol);
    const SymmetricMatrix root_pinv = pinv_sqrt(r0);
    // Iterate the ambient flow and read each T_n off through the defining
    // relation Phi_P(B T B) = B Psi_P(T) B with B = R0^{1/2}.  One
    // pseudoinverse sandwich per step; round-tripping T through B and back
    // every step would amplify noise in the weak directions of R0.
    IntrinsicContraction t{h.projection().matrix(), h};
    PsdOperator r = r0; // B T0 B = R0 for T0 = P_H
    const double threshold = cfg.stop_tol * (1.0 + t.t.frobenius());
    bool prev_small = false;
    for (int n = 0; n < cfg.max_iter; ++n) {
        const Projection& p = step_projection(n, pa, pb);
        r = residual_map(r, p);
        SymmetricMatrix t_next(
            symmetrize(root_pinv.mat() * r.mat() * root_pinv.mat()));
        const double delta = (t_next.mat() - t.t.mat()).norm();
        t.t = t_next;
        if (delta <= threshold) {
            if (prev_small) break;
            prev_small = true;
        } else {
            prev_small = false;
        }
    }
    return t;
}

GapResult gap(const PsdOperator& r0, const Subspace& k, const IntrinsicContraction& t_inf,
              const PsdOperator& r_inf) {
    if (k.ambient_dim() != r0.dim() || t_inf.t.dim() != r0.dim() ||
        r_inf.dim() != r0.dim()) {
        throw DimensionMismatch("gap: dimension mismatch");
    }
    const ShortedResult shorted = shorted_intrinsic(r0, k);
    PsdOperator g = clamp_psd(symmetrize(shorted.p_m.mat() - t_inf.t.mat()));
    PsdOperator gap_op = clamp_psd(symmetrize(shorted.s.mat() - r_inf.mat()));
    const Eigen::MatrixXd root = psd_sqrt(r0).mat();
    const double loc =
        (gap_op.mat() - symmetrize(root * g.mat() * root)).norm();
    const bool equal = g.matrix().frobenius() <= 1e-8 * r0.dim();
    return {g, gap_op, loc, equal};
}

std::optional<PsdOperator> commuting_shortcut(const PsdOperator& r0, const Projection& pa,
                                              const Projection& pb, double tol) {
    const double scale = tol * (1.0 + r0.matrix().frobenius());
    if (commutator_norm(r0.matrix(), pa.matrix()) > scale ||
        commutator_norm(r0.matrix(), pb.matrix()) > scale ||
        commutator_norm(pa.matrix(), pb.matrix()) > scale) {
        return std::nullopt;
    }
    const Projection pk = kernel_intersection(pa, pb).projection();
    return PsdOperator(symmetrize(r0.mat() * pk.mat()), 1e-8);
}

KernelComparison kernel_comparison(const PsdOperator& s, const PsdOperator& r_inf,
                                   double rank_tol) {
    if (s.dim() != r_inf.dim()) {
        throw DimensionMismatch("kernel_comparison: dimension mismatch");
    }
    const int d = s.dim();
    const double cutoff = rank_tol * s.lambda_max();
    const double bound = rank_tol * (1.0 + r_inf.matrix().frobenius());
    for (int i = 0; i < d; ++i) {
        if (s.eigenvalues()(i) > cutoff && s.eigenvalues()(i) > 0.0) continue;
        const Eigen::VectorXd x = s.eigenvectors().col(i);
        if (x.dot(r_inf.mat() * x) > bound) {
            return {false, x};
        }
    }
    return {true, std::nullopt};
}

} // namespace wrflow
