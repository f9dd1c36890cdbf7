#include "wrflow/shorting.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <sstream>

namespace wrflow {

BlockDecomposition block_decompose(const PsdOperator& r0, const Subspace& k) {
    if (k.ambient_dim() != r0.dim()) {
        throw DimensionMismatch("block_decompose: subspace ambient dim != operator dim");
    }
    const int d = r0.dim();
    const int r = k.rank();
    Subspace kp = orthogonal_complement(k);
    Eigen::MatrixXd frame(d, d);
    frame.leftCols(r) = k.basis();
    frame.rightCols(d - r) = kp.basis();
    const Eigen::MatrixXd blocks = frame.transpose() * r0.mat() * frame;
    return {k, kp,
            symmetrize(blocks.topLeftCorner(r, r)),
            blocks.topRightCorner(r, d - r),
            symmetrize(blocks.bottomRightCorner(d - r, d - r))};
}

PsdOperator shorted_schur(const PsdOperator& r0, const Subspace& k) {
    const int d = r0.dim();
    const int r = k.rank();
    if (r == 0) return PsdOperator(SymmetricMatrix::zero(d));
    BlockDecomposition bd = block_decompose(r0, k);
    Eigen::MatrixXd schur = bd.a_block;
    if (r < d) {
        const SymmetricMatrix c_pinv = pinv_psd(PsdOperator(bd.c_block));
        schur = symmetrize(bd.a_block -
                           bd.b_block * c_pinv.mat() * bd.b_block.transpose());
    }
    const Eigen::MatrixXd& q = k.basis();
    // Schur complement of a PSD matrix is PSD; allow a wider clip window for
    // the roundoff introduced by the pseudoinverse product.
    return PsdOperator(symmetrize(q * schur * q.transpose()), 1e-8);
}

Subspace subspace_m(const PsdOperator& r0, const Subspace& k, double rank_tol) {
    if (k.ambient_dim() != r0.dim()) {
        throw DimensionMismatch("subspace_m: subspace ambient dim != operator dim");
    }
    const int d = r0.dim();
    // eigenvectors with eigenvalue above cutoff span H_{R0}
    const double cutoff = rank_tol * r0.lambda_max();
    int hdim = 0;
    for (int i = 0; i < d; ++i) {
        if (r0.eigenvalues()(i) > cutoff && r0.eigenvalues()(i) > 0.0) ++hdim;
    }
    if (hdim == 0) return Subspace::trivial(d);
    const Eigen::MatrixXd qh = r0.eigenvectors().leftCols(hdim);

    const Eigen::MatrixXd pk = k.rank() > 0
        ? Eigen::MatrixXd(k.basis() * k.basis().transpose())
        : Eigen::MatrixXd::Zero(d, d);
    const Eigen::MatrixXd root = psd_sqrt(r0).mat();
    // rows of A vanish on u exactly when R0^{1/2} u stays inside K
    const Eigen::MatrixXd a =
        (Eigen::MatrixXd::Identity(d, d) - pk) * root * qh;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullV);
    const double smax = svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
    const double sv_cutoff = rank_tol * std::max(smax, std::sqrt(r0.lambda_max()));
    int null_dim = 0;
    for (int i = static_cast<int>(svd.singularValues().size()) - 1; i >= 0; --i) {
        if (svd.singularValues()(i) <= sv_cutoff) ++null_dim;
        else break;
    }
    null_dim += hdim - static_cast<int>(svd.singularValues().size());
    if (null_dim <= 0) return Subspace::trivial(d);
    const Eigen::MatrixXd v_null = svd.matrixV().rightCols(null_dim);
    return Subspace(d, qh * v_null);
}

ShortedResult shorted_intrinsic(const PsdOperator& r0, const Subspace& k) {
    const Subspace m = subspace_m(r0, k);
    const Projection p_m = m.projection();
    const Eigen::MatrixXd root = psd_sqrt(r0).mat();
    PsdOperator s_intr(symmetrize(root * p_m.mat() * root), 1e-8);
    const PsdOperator s_schur = shorted_schur(r0, k);
    const double disc = (s_intr.mat() - s_schur.mat()).norm();
    if (disc > 1e-6 * (1.0 + r0.matrix().frobenius())) {
        std::ostringstream os;
        os << "MethodDisagreement: ||S_schur - S_intrinsic||_F = " << disc;
        throw MethodDisagreement(os.str());
    }
    return {s_intr, m, p_m, disc};
}

double variational_value(const PsdOperator& r0, const Subspace& k, const Eigen::VectorXd& x) {
    if (x.size() != r0.dim()) {
        throw DimensionMismatch("variational_value: vector length != dim");
    }
    const int d = r0.dim();
    const int r = k.rank();
    const Eigen::VectorXd alpha =
        r > 0 ? Eigen::VectorXd(k.basis().transpose() * x) : Eigen::VectorXd(0);
    const Eigen::VectorXd in_k =
        r > 0 ? Eigen::VectorXd(k.basis() * alpha) : Eigen::VectorXd::Zero(d);
    const double outside = (x - in_k).norm();
    if (outside > 1e-10 * std::max(x.norm(), 1e-300)) {
        std::ostringstream os;
        os << "NotInK: component outside K has norm " << outside;
        throw NotInK(os.str());
    }
    if (r == 0 || x.norm() == 0.0) return 0.0;
    BlockDecomposition bd = block_decompose(r0, k);
    if (r == d) return alpha.dot(bd.a_block * alpha);
    const SymmetricMatrix c_pinv = pinv_psd(PsdOperator(bd.c_block));
    // normal-equations minimizer over the K^perp coordinates
    const Eigen::VectorXd beta = -c_pinv.mat() * bd.b_block.transpose() * alpha;
    return alpha.dot(bd.a_block * alpha) + 2.0 * alpha.dot(bd.b_block * beta) +
           beta.dot(bd.c_block * beta);
}

} // namespace wrflow
