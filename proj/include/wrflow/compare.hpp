#ifndef WRFLOW_COMPARE_HPP
#define WRFLOW_COMPARE_HPP

#include "wrflow/factorization.hpp"
#include "wrflow/flow.hpp"
#include "wrflow/report.hpp"
#include "wrflow/shorting.hpp"

namespace wrflow {

// Joint result of flow + shorting + intrinsic flow + gap.
struct CompareOutcome {
    FlowTrace trace;
    ShortedResult shorted;
    IntrinsicContraction t_inf;
    GapResult gap_result;
    std::optional<PsdOperator> shortcut;       // commuting-case closed form
    double shortcut_residual = 0.0;            // ||r_inf - R0 P_K||, if applicable
    double fixed_point_a = 0.0;
    double fixed_point_b = 0.0;
    double support_res = 0.0;
    double energy_residual = 0.0;
    double dissipated_trace = 0.0;
    double surviving_trace = 0.0;
    double comm_r0_pa = 0.0;
    double comm_r0_pb = 0.0;
    double comm_pa_pb = 0.0;
};

CompareOutcome run_compare(const PsdOperator& r0, const Projection& pa,
                           const Projection& pb, const FlowConfig& cfg = {});

// Throws InvariantViolation naming the violated relation.
void check_compare_invariants(const CompareOutcome& out);

Report flow_report(const PsdOperator& r0, const Projection& pa, const Projection& pb,
                   const FlowTrace& trace, const FlowConfig& cfg);
Report shorting_report(const PsdOperator& r0, const ShortedResult& shorted);
Report compare_report(const PsdOperator& r0, const Projection& pa, const Projection& pb,
                      const CompareOutcome& out, const FlowConfig& cfg);

} // namespace wrflow

#endif
