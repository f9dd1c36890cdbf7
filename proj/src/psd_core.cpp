#include "wrflow/psd_core.hpp"

#include <Eigen/QR>
#include <cmath>
#include <sstream>

namespace wrflow {

Eigen::MatrixXd symmetrize(const Eigen::MatrixXd& m) {
    return 0.5 * (m + m.transpose());
}

SymmetricMatrix::SymmetricMatrix(const Eigen::MatrixXd& m) {
    if (m.rows() != m.cols()) {
        std::ostringstream os;
        os << "SymmetricMatrix: matrix is " << m.rows() << "x" << m.cols();
        throw DimensionMismatch(os.str());
    }
    if (!m.allFinite()) {
        throw ValidationError("SymmetricMatrix: non-finite entries");
    }
    m_ = symmetrize(m);
}

SymmetricMatrix SymmetricMatrix::zero(int dim) {
    return SymmetricMatrix(Eigen::MatrixXd::Zero(dim, dim));
}

SymmetricMatrix SymmetricMatrix::identity(int dim) {
    return SymmetricMatrix(Eigen::MatrixXd::Identity(dim, dim));
}

namespace {

// Eigen returns ascending order; reverse to descending.
void eigen_descending(const Eigen::MatrixXd& m, Eigen::VectorXd& evals, Eigen::MatrixXd& evecs) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
    if (es.info() != Eigen::Success) {
        throw Error("eigendecomposition failed to converge");
    }
    evals = es.eigenvalues().reverse();
    evecs = es.eigenvectors().rowwise().reverse();
}

} // namespace

PsdOperator::PsdOperator(const SymmetricMatrix& m, double clip_tol) : matrix_(m) {
    eigen_descending(m.mat(), eigenvalues_, eigenvectors_);
    const int d = m.dim();
    const double lmax = d > 0 ? std::max(eigenvalues_(0), 0.0) : 0.0;
    const double floor = -clip_tol * (1.0 + lmax);
    double lmin = d > 0 ? eigenvalues_(d - 1) : 0.0;
    if (lmin < floor) {
        std::ostringstream os;
        os << "NotPsd: eigenvalue " << lmin << " below clip floor " << floor;
        throw NotPsd(os.str());
    }
    if (lmin < 0.0) {
        for (int i = 0; i < d; ++i) {
            if (eigenvalues_(i) < 0.0) eigenvalues_(i) = 0.0;
        }
        clip_applied_ = true;
        matrix_ = SymmetricMatrix(
            eigenvectors_ * eigenvalues_.asDiagonal() * eigenvectors_.transpose());
    }
}

PsdOperator::PsdOperator(const Eigen::MatrixXd& m, double clip_tol)
    : PsdOperator(SymmetricMatrix(m), clip_tol) {}

Projection::Projection(const SymmetricMatrix& m) : matrix_(m), rank_(0) {
    const int d = m.dim();
    const Eigen::MatrixXd& p = m.mat();
    const double idem = (p * p - p).norm();
    if (idem > 1e-10 * std::max(d, 1)) {
        std::ostringstream os;
        os << "Projection: not idempotent, ||P^2-P||_F = " << idem;
        throw ValidationError(os.str());
    }
    Eigen::VectorXd evals;
    Eigen::MatrixXd evecs;
    eigen_descending(p, evals, evecs);
    for (int i = 0; i < d; ++i) {
        const double l = evals(i);
        if (std::abs(l) > 1e-10 && std::abs(l - 1.0) > 1e-10) {
            std::ostringstream os;
            os << "Projection: eigenvalue " << l << " not in {0,1}";
            throw ValidationError(os.str());
        }
        if (l > 0.5) ++rank_;
    }
}

Projection Projection::zero(int dim) {
    return Projection(SymmetricMatrix::zero(dim));
}

Projection Projection::identity(int dim) {
    return Projection(SymmetricMatrix::identity(dim));
}

Subspace::Subspace(int ambient_dim, const Eigen::MatrixXd& basis)
    : ambient_dim_(ambient_dim), basis_(basis) {
    if (basis.rows() != ambient_dim) {
        throw DimensionMismatch("Subspace: basis rows != ambient dim");
    }
    const int r = static_cast<int>(basis.cols());
    if (r > 0) {
        const double ortho =
            (basis.transpose() * basis - Eigen::MatrixXd::Identity(r, r)).norm();
        if (ortho > 1e-12 * std::max(r, 1) * 10.0) {
            std::ostringstream os;
            os << "Subspace: columns not orthonormal, ||B^TB-I||_F = " << ortho;
            throw ValidationError(os.str());
        }
    }
}

Subspace Subspace::trivial(int ambient_dim) {
    return Subspace(ambient_dim, Eigen::MatrixXd(ambient_dim, 0));
}

Subspace Subspace::full(int ambient_dim) {
    return Subspace(ambient_dim, Eigen::MatrixXd::Identity(ambient_dim, ambient_dim));
}

Projection Subspace::projection() const {
    if (rank() == 0) return Projection::zero(ambient_dim_);
    return Projection(SymmetricMatrix(symmetrize(basis_ * basis_.transpose())));
}

PsdOperator spectral_decompose(const SymmetricMatrix& m, double clip_tol) {
    return PsdOperator(m, clip_tol);
}

PsdOperator psd_sqrt(const PsdOperator& r) {
    Eigen::VectorXd roots = r.eigenvalues().array().max(0.0).sqrt();
    Eigen::MatrixXd s = symmetrize(
        r.eigenvectors() * roots.asDiagonal() * r.eigenvectors().transpose());
    return PsdOperator(s);
}

SymmetricMatrix pinv_psd(const PsdOperator& r, double rank_tol) {
    const int d = r.dim();
    const double cutoff = rank_tol * r.lambda_max();
    Eigen::VectorXd inv = Eigen::VectorXd::Zero(d);
    for (int i = 0; i < d; ++i) {
        const double l = r.eigenvalues()(i);
        if (l > cutoff && l > 0.0) inv(i) = 1.0 / l;
    }
    return SymmetricMatrix(
        symmetrize(r.eigenvectors() * inv.asDiagonal() * r.eigenvectors().transpose()));
}

SymmetricMatrix pinv_sqrt(const PsdOperator& r, double rank_tol) {
    // rank decided on r's spectrum, not its square root's: an eigenvalue at
    // the numerical-zero level has a square root well above rank_tol * sqrt
    // of lambda_max and would otherwise be inverted
    const int d = r.dim();
    const double cutoff = rank_tol * r.lambda_max();
    Eigen::VectorXd inv = Eigen::VectorXd::Zero(d);
    for (int i = 0; i < d; ++i) {
        const double l = r.eigenvalues()(i);
        if (l > cutoff && l > 0.0) inv(i) = 1.0 / std::sqrt(l);
    }
    return SymmetricMatrix(
        symmetrize(r.eigenvectors() * inv.asDiagonal() * r.eigenvectors().transpose()));
}

LoewnerResult loewner_leq(const SymmetricMatrix& a, const SymmetricMatrix& b, double tol) {
    if (a.dim() != b.dim()) {
        throw DimensionMismatch("loewner_leq: dimension mismatch");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(b.mat() - a.mat(),
                                                      Eigen::EigenvaluesOnly);
    const double margin = a.dim() > 0 ? es.eigenvalues()(0) : 0.0;
    return {margin >= -tol * (1.0 + b.frobenius()), margin};
}

Projection proj_from_span(int dim, const std::vector<Eigen::VectorXd>& vectors) {
    if (vectors.empty()) return Projection::zero(dim);
    Eigen::MatrixXd v(dim, static_cast<Eigen::Index>(vectors.size()));
    double max_norm = 0.0;
    for (size_t j = 0; j < vectors.size(); ++j) {
        if (vectors[j].size() != dim) {
            throw DimensionMismatch("proj_from_span: vector length != dim");
        }
        v.col(static_cast<Eigen::Index>(j)) = vectors[j];
        max_norm = std::max(max_norm, vectors[j].norm());
    }
    if (max_norm == 0.0) return Projection::zero(dim);
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(v);
    qr.setThreshold(1e-12);
    const int rank = static_cast<int>(qr.rank());
    if (rank == 0) return Projection::zero(dim);
    Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(dim, rank);
    return Projection(SymmetricMatrix(symmetrize(q * q.transpose())));
}

namespace {

// Basis of the eigenspace of a symmetric matrix for eigenvalues <= cutoff.
Subspace small_eigenspace(const Eigen::MatrixXd& m, double cutoff) {
    const int d = static_cast<int>(m.rows());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
    int r = 0;
    for (int i = 0; i < d; ++i) {
        if (es.eigenvalues()(i) <= cutoff) ++r;
    }
    // ascending order: small eigenvalues come first
    return Subspace(d, es.eigenvectors().leftCols(r));
}

} // namespace

Subspace kernel(const Projection& p) {
    return small_eigenspace(p.mat(), 0.5);
}

Subspace kernel_intersection(const Projection& pa, const Projection& pb, double tol) {
    if (pa.dim() != pb.dim()) {
        throw DimensionMismatch("kernel_intersection: dimension mismatch");
    }
    // pa + pb is PSD with ker(pa+pb) = ker pa ∩ ker pb
    return small_eigenspace(pa.mat() + pb.mat(), tol);
}

double commutator_norm(const SymmetricMatrix& a, const SymmetricMatrix& b) {
    if (a.dim() != b.dim()) {
        throw DimensionMismatch("commutator_norm: dimension mismatch");
    }
    return (a.mat() * b.mat() - b.mat() * a.mat()).norm();
}

Projection support_projection(const PsdOperator& r, double rank_tol) {
    const int d = r.dim();
    const double cutoff = rank_tol * r.lambda_max();
    int k = 0;
    while (k < d && r.eigenvalues()(k) > cutoff && r.eigenvalues()(k) > 0.0) ++k;
    if (k == 0) return Projection::zero(d);
    const Eigen::MatrixXd q = r.eigenvectors().leftCols(k);
    return Projection(SymmetricMatrix(symmetrize(q * q.transpose())));
}

Subspace orthogonal_complement(const Subspace& s) {
    const int d = s.ambient_dim();
    const int r = s.rank();
    if (r == 0) return Subspace::full(d);
    if (r == d) return Subspace::trivial(d);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(s.basis());
    Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(d, d);
    return Subspace(d, q.rightCols(d - r));
}

} // namespace wrflow
