#ifndef WRFLOW_FACTORIZATION_HPP
#define WRFLOW_FACTORIZATION_HPP

#include <optional>

#include "wrflow/flow.hpp"
#include "wrflow/psd_core.hpp"
#include "wrflow/shorting.hpp"

namespace wrflow {

// Contraction X with A^{1/2} = X B^{1/2}, supported H_B -> H_A.
struct DouglasFactor {
    Eigen::MatrixXd x;
    double norm_bound; // operator norm of x
};

// Positive contraction T on H_{R0} with R = R0^{1/2} T R0^{1/2},
// represented ambiently with support in H_{R0}.
struct IntrinsicContraction {
    SymmetricMatrix t;
    Subspace h_r0;
};

struct GapResult {
    PsdOperator g;            // G = P_M - T_inf on H_{R0}
    PsdOperator gap_operator; // S - R_inf
    double localization_residual; // ||(S - R_inf) - R0^{1/2} G R0^{1/2}||_F
    bool equality_flag;           // G ~ 0
};

struct KernelComparison {
    bool holds;
    std::optional<Eigen::VectorXd> witness;
};

DouglasFactor douglas_factor(const PsdOperator& a, const PsdOperator& b,
                             double rank_tol = kRankTol);

IntrinsicContraction intrinsic_contraction(const PsdOperator& r, const PsdOperator& r0,
                                           double rank_tol = kRankTol);

// Psi_P(T), defined by Phi_P(R0^{1/2} T R0^{1/2}) = R0^{1/2} Psi_P(T) R0^{1/2}
IntrinsicContraction psi_map(const IntrinsicContraction& t, const Projection& p,
                             const PsdOperator& r0);

// T_0 = P_{H_{R0}}, T_{n+1} = Psi_{P_n}(T_n), same schedule and stopping
// rule as run_flow.
IntrinsicContraction run_intrinsic_flow(const PsdOperator& r0, const Projection& pa,
                                        const Projection& pb, const FlowConfig& cfg = {});

// r_inf is the ambient flow limit, kept as an independent route to S - R_inf.
GapResult gap(const PsdOperator& r0, const Subspace& k, const IntrinsicContraction& t_inf,
              const PsdOperator& r_inf);

// R0 * P_K when R0, pa, pb pairwise commute; empty otherwise.
std::optional<PsdOperator> commuting_shortcut(const PsdOperator& r0, const Projection& pa,
                                              const Projection& pb, double tol = kRankTol);

// ker S subset ker R_inf, checked on the small-eigenvalue eigenvectors of s.
KernelComparison kernel_comparison(const PsdOperator& s, const PsdOperator& r_inf,
                                   double rank_tol = kRankTol);

} // namespace wrflow

#endif
