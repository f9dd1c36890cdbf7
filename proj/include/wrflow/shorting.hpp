#ifndef WRFLOW_SHORTING_HPP
#define WRFLOW_SHORTING_HPP

#include "wrflow/psd_core.hpp"

namespace wrflow {

// Blocks of R0 in an orthonormal frame whose first r columns span K.
struct BlockDecomposition {
    Subspace k_basis;
    Subspace k_perp_basis;
    Eigen::MatrixXd a_block; // r x r, compression to K
    Eigen::MatrixXd b_block; // r x (d-r)
    Eigen::MatrixXd c_block; // (d-r) x (d-r), compression to K^perp
};

struct ShortedResult {
    PsdOperator s;
    Subspace m_subspace;  // M inside H_{R0}
    Projection p_m;       // ambient projection onto M
    double method_discrepancy; // ||S_schur - S_intrinsic||_F
};

BlockDecomposition block_decompose(const PsdOperator& r0, const Subspace& k);

// Generalized Schur complement (a - b c^+ b^T), embedded back on K.
PsdOperator shorted_schur(const PsdOperator& r0, const Subspace& k);

// M = { u in H_{R0} : R0^{1/2} u in K }
Subspace subspace_m(const PsdOperator& r0, const Subspace& k, double rank_tol = kRankTol);

// S = R0^{1/2} P_M R0^{1/2}, cross-checked against the Schur path.
ShortedResult shorted_intrinsic(const PsdOperator& r0, const Subspace& k);

// inf over y in K^perp of <x+y, R0 (x+y)>, closed form via normal equations.
double variational_value(const PsdOperator& r0, const Subspace& k, const Eigen::VectorXd& x);

} // namespace wrflow

#endif
