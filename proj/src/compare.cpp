#include "wrflow/compare.hpp"

#include <sstream>

namespace wrflow {

CompareOutcome run_compare(const PsdOperator& r0, const Projection& pa,
                           const Projection& pb, const FlowConfig& cfg) {
    FlowConfig flow_cfg = cfg;
    flow_cfg.ledger_enabled = true;

    CompareOutcome out{
        run_flow(r0, pa, pb, flow_cfg),
        shorted_intrinsic(r0, kernel_intersection(pa, pb)),
        run_intrinsic_flow(r0, pa, pb, cfg),
        GapResult{PsdOperator(SymmetricMatrix::zero(r0.dim())),
                  PsdOperator(SymmetricMatrix::zero(r0.dim())), 0.0, true},
        std::nullopt};

    const Subspace k = kernel_intersection(pa, pb);
    out.gap_result = gap(r0, k, out.t_inf, out.trace.r_inf);
    out.shortcut = commuting_shortcut(r0, pa, pb);
    if (out.shortcut) {
        out.shortcut_residual =
            (out.trace.r_inf.mat() - out.shortcut->mat()).norm();
    }
    out.fixed_point_a = fixed_point_residual(out.trace.r_inf, pa);
    out.fixed_point_b = fixed_point_residual(out.trace.r_inf, pb);
    out.support_res = support_residual(out.trace.r_inf, pa, pb);
    const EnergyReport energy = energy_report(out.trace);
    out.energy_residual = energy.residual_norm;
    out.dissipated_trace = energy.dissipated_trace;
    out.surviving_trace = energy.surviving_trace;
    out.comm_r0_pa = commutator_norm(r0.matrix(), pa.matrix());
    out.comm_r0_pb = commutator_norm(r0.matrix(), pb.matrix());
    out.comm_pa_pb = commutator_norm(pa.matrix(), pb.matrix());
    return out;
}

namespace {

void require(bool ok, const std::string& name, double value) {
    if (!ok) {
        std::ostringstream os;
        os << "invariant violated: " << name << " (value " << value << ")";
        throw InvariantViolation(os.str());
    }
}

} // namespace

void check_compare_invariants(const CompareOutcome& out) {
    const double scale = 1.0 + out.trace.r0.matrix().frobenius();
    const SymmetricMatrix zero = SymmetricMatrix::zero(out.trace.r0.dim());

    LoewnerResult c = loewner_leq(zero, out.trace.r_inf.matrix(), 1e-8 * scale);
    require(c.holds, "0 <= R_inf", c.margin);
    c = loewner_leq(out.trace.r_inf.matrix(), out.shorted.s.matrix(), 1e-8 * scale);
    require(c.holds, "R_inf <= S", c.margin);
    c = loewner_leq(out.shorted.s.matrix(), out.trace.r0.matrix(), 1e-8 * scale);
    require(c.holds, "S <= R0", c.margin);

    c = loewner_leq(out.t_inf.t, out.shorted.p_m.matrix(), 1e-9 * scale);
    require(c.holds, "T_inf <= P_M", c.margin);
    c = loewner_leq(zero, out.t_inf.t, 1e-9 * scale);
    require(c.holds, "0 <= T_inf", c.margin);

    require(out.gap_result.localization_residual <= 1e-8 * scale,
            "||(S - R_inf) - R0^{1/2} G R0^{1/2}|| small",
            out.gap_result.localization_residual);
    require(out.energy_residual <=
                1e-9 * scale * std::max(out.trace.iterate_count, 1),
            "energy ledger telescopes to R0 - R_inf", out.energy_residual);
}

namespace {

void report_common(Report& rep, const PsdOperator& r0, const Projection& pa,
                   const Projection& pb, const FlowConfig& cfg) {
    rep.set_int("input.dim", r0.dim());
    rep.set_real("input.r0_fro", r0.matrix().frobenius());
    rep.set_int("input.pa_rank", pa.rank());
    rep.set_int("input.pb_rank", pb.rank());
    rep.set_real("input.comm_r0_pa", commutator_norm(r0.matrix(), pa.matrix()));
    rep.set_real("input.comm_r0_pb", commutator_norm(r0.matrix(), pb.matrix()));
    rep.set_real("input.comm_pa_pb", commutator_norm(pa.matrix(), pb.matrix()));
    rep.set_real("config.stop_tol", cfg.stop_tol);
    rep.set_int("config.max_iter", cfg.max_iter);
    rep.set_real("config.clip_tol", kClipTol);
    rep.set_real("config.rank_tol", kRankTol);
}

} // namespace

Report flow_report(const PsdOperator& r0, const Projection& pa, const Projection& pb,
                   const FlowTrace& trace, const FlowConfig& cfg) {
    Report rep;
    report_common(rep, r0, pa, pb, cfg);
    rep.set_int("flow.iterations", trace.iterate_count);
    rep.set_flag("flow.converged", trace.converged);
    rep.set_real("flow.final_delta",
                 trace.deltas.empty() ? 0.0 : trace.deltas.back());
    rep.set_matrix("flow.r_inf", trace.r_inf.mat());
    rep.set_real("flow.fixed_point_residual_a", fixed_point_residual(trace.r_inf, pa));
    rep.set_real("flow.fixed_point_residual_b", fixed_point_residual(trace.r_inf, pb));
    rep.set_real("flow.support_residual", support_residual(trace.r_inf, pa, pb));
    if (trace.ledger_enabled) {
        const EnergyReport energy = energy_report(trace);
        rep.set_real("energy.residual", energy.residual_norm);
        rep.set_real("energy.dissipated_trace", energy.dissipated_trace);
        rep.set_real("energy.surviving_trace", energy.surviving_trace);
    }
    return rep;
}

Report shorting_report(const PsdOperator& r0, const ShortedResult& shorted) {
    Report rep;
    rep.set_int("input.dim", r0.dim());
    rep.set_real("input.r0_fro", r0.matrix().frobenius());
    rep.set_matrix("short.s", shorted.s.mat());
    rep.set_int("short.m_dim", shorted.m_subspace.rank());
    rep.set_real("short.method_discrepancy", shorted.method_discrepancy);
    rep.set_real("config.rank_tol", kRankTol);
    return rep;
}

Report compare_report(const PsdOperator& r0, const Projection& pa, const Projection& pb,
                      const CompareOutcome& out, const FlowConfig& cfg) {
    Report rep = flow_report(r0, pa, pb, out.trace, cfg);
    rep.set_matrix("short.s", out.shorted.s.mat());
    rep.set_int("short.m_dim", out.shorted.m_subspace.rank());
    rep.set_real("short.method_discrepancy", out.shorted.method_discrepancy);
    rep.set_real("gap.fro", (out.shorted.s.mat() - out.trace.r_inf.mat()).norm());
    rep.set_matrix("gap.g_spectrum",
                   Eigen::MatrixXd(out.gap_result.g.eigenvalues().transpose()));
    rep.set_real("gap.localization_residual", out.gap_result.localization_residual);
    rep.set_flag("gap.equality", out.gap_result.equality_flag);
    rep.set_flag("shortcut.applicable", out.shortcut.has_value());
    if (out.shortcut) {
        rep.set_real("shortcut.residual", out.shortcut_residual);
    }
    return rep;
}

} // namespace wrflow
