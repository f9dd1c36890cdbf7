#ifndef WRFLOW_PSD_CORE_HPP
#define WRFLOW_PSD_CORE_HPP

#include <Eigen/Dense>
#include <vector>

#include "wrflow/errors.hpp"

namespace wrflow {

// Shared rank/clip thresholds, relative to the largest eigenvalue.
inline constexpr double kClipTol = 1e-10;
inline constexpr double kRankTol = 1e-10;

// Dense real symmetric matrix; symmetrized on construction.
class SymmetricMatrix {
public:
    explicit SymmetricMatrix(const Eigen::MatrixXd& m);
    static SymmetricMatrix zero(int dim);
    static SymmetricMatrix identity(int dim);

    int dim() const { return static_cast<int>(m_.rows()); }
    const Eigen::MatrixXd& mat() const { return m_; }
    double frobenius() const { return m_.norm(); }
    double trace() const { return m_.trace(); }

private:
    Eigen::MatrixXd m_;
};

// Symmetric matrix certified PSD, with cached spectral decomposition.
// Eigenvalues sorted descending; tiny negatives clipped to zero.
class PsdOperator {
public:
    explicit PsdOperator(const SymmetricMatrix& m, double clip_tol = kClipTol);
    explicit PsdOperator(const Eigen::MatrixXd& m, double clip_tol = kClipTol);

    const SymmetricMatrix& matrix() const { return matrix_; }
    const Eigen::MatrixXd& mat() const { return matrix_.mat(); }
    const Eigen::VectorXd& eigenvalues() const { return eigenvalues_; }
    const Eigen::MatrixXd& eigenvectors() const { return eigenvectors_; }
    bool clip_applied() const { return clip_applied_; }
    int dim() const { return matrix_.dim(); }
    double lambda_max() const { return eigenvalues_.size() ? eigenvalues_(0) : 0.0; }

private:
    SymmetricMatrix matrix_;
    Eigen::VectorXd eigenvalues_;
    Eigen::MatrixXd eigenvectors_;
    bool clip_applied_ = false;
};

// Symmetric idempotent matrix.
class Projection {
public:
    explicit Projection(const SymmetricMatrix& m);
    static Projection zero(int dim);
    static Projection identity(int dim);

    const SymmetricMatrix& matrix() const { return matrix_; }
    const Eigen::MatrixXd& mat() const { return matrix_.mat(); }
    int rank() const { return rank_; }
    int dim() const { return matrix_.dim(); }

private:
    SymmetricMatrix matrix_;
    int rank_;
};

// Orthonormal column frame spanning a subspace of R^d (r may be 0).
class Subspace {
public:
    Subspace(int ambient_dim, const Eigen::MatrixXd& basis);
    static Subspace trivial(int ambient_dim);
    static Subspace full(int ambient_dim);

    int ambient_dim() const { return ambient_dim_; }
    int rank() const { return static_cast<int>(basis_.cols()); }
    const Eigen::MatrixXd& basis() const { return basis_; }
    Projection projection() const;

private:
    int ambient_dim_;
    Eigen::MatrixXd basis_;
};

struct LoewnerResult {
    bool holds;
    double margin; // lambda_min(b - a)
};

PsdOperator spectral_decompose(const SymmetricMatrix& m, double clip_tol = kClipTol);
PsdOperator psd_sqrt(const PsdOperator& r);
SymmetricMatrix pinv_psd(const PsdOperator& r, double rank_tol = kRankTol);
SymmetricMatrix pinv_sqrt(const PsdOperator& r, double rank_tol = kRankTol);
LoewnerResult loewner_leq(const SymmetricMatrix& a, const SymmetricMatrix& b, double tol);
Projection proj_from_span(int dim, const std::vector<Eigen::VectorXd>& vectors);
Subspace kernel(const Projection& p);
Subspace kernel_intersection(const Projection& pa, const Projection& pb, double tol = kRankTol);
double commutator_norm(const SymmetricMatrix& a, const SymmetricMatrix& b);
Projection support_projection(const PsdOperator& r, double rank_tol = kRankTol);

// (M + M^T)/2, used after every floating-point product.
Eigen::MatrixXd symmetrize(const Eigen::MatrixXd& m);

// Orthonormal complement of a subspace within the ambient space.
Subspace orthogonal_complement(const Subspace& s);

} // namespace wrflow

#endif
