#ifndef WRFLOW_FLOW_HPP
#define WRFLOW_FLOW_HPP

#include <optional>
#include <string>
#include <vector>

#include "wrflow/psd_core.hpp"

namespace wrflow {

struct FlowConfig {
    double stop_tol = 1e-12;
    int max_iter = 10000;
    bool keep_iterates = false;
    bool ledger_enabled = false;
};

// Full record of a flow run.
struct FlowTrace {
    PsdOperator r0;
    int iterate_count = 0;
    std::vector<double> deltas;          // ||R_{n+1} - R_n||_F per step
    PsdOperator r_inf;
    std::vector<SymmetricMatrix> dissipation; // D_n, if ledger_enabled
    std::vector<PsdOperator> iterates;        // R_0..R_N, if keep_iterates
    bool converged = false;
    bool ledger_enabled = false;
    std::string schedule = "even:B odd:A";
};

struct EnergyReport {
    SymmetricMatrix partial_sum;  // sum of D_n
    double residual_norm;         // ||R0 - R_final - sum D_n||_F
    double dissipated_trace;
    double surviving_trace;
};

// Phi_P(R) = R^{1/2} (I - P) R^{1/2}
PsdOperator residual_map(const PsdOperator& r, const Projection& p);

// pb on even steps, pa on odd steps
const Projection& step_projection(int n, const Projection& pa, const Projection& pb);

FlowTrace run_flow(const PsdOperator& r0, const Projection& pa, const Projection& pb,
                   const FlowConfig& cfg = {});

// D = R^{1/2} P R^{1/2}
PsdOperator dissipation_term(const PsdOperator& r, const Projection& p);

EnergyReport energy_report(const FlowTrace& trace);

// ||Phi_P(r) - r||_F
double fixed_point_residual(const PsdOperator& r, const Projection& p);

// max(||pa r||_F, ||pb r||_F)
double support_residual(const PsdOperator& r, const Projection& pa, const Projection& pb);

} // namespace wrflow

#endif
