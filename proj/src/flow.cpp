#include "wrflow/flow.hpp"

#include <cmath>

namespace wrflow {

PsdOperator residual_map(const PsdOperator& r, const Projection& p) {
    if (r.dim() != p.dim()) {
        throw DimensionMismatch("residual_map: dimension mismatch");
    }
    const PsdOperator root = psd_sqrt(r);
    const Eigen::MatrixXd comp =
        Eigen::MatrixXd::Identity(r.dim(), r.dim()) - p.mat();
    return PsdOperator(symmetrize(root.mat() * comp * root.mat()));
}

const Projection& step_projection(int n, const Projection& pa, const Projection& pb) {
    return (n % 2 == 0) ? pb : pa;
}

PsdOperator dissipation_term(const PsdOperator& r, const Projection& p) {
    if (r.dim() != p.dim()) {
        throw DimensionMismatch("dissipation_term: dimension mismatch");
    }
    const PsdOperator root = psd_sqrt(r);
    return PsdOperator(symmetrize(root.mat() * p.mat() * root.mat()));
}

FlowTrace run_flow(const PsdOperator& r0, const Projection& pa, const Projection& pb,
                   const FlowConfig& cfg) {
    if (r0.dim() != pa.dim() || r0.dim() != pb.dim()) {
        throw DimensionMismatch("run_flow: dimension mismatch");
    }
    FlowTrace trace{r0, 0, {}, r0, {}, {}, false, cfg.ledger_enabled};
    const double threshold = cfg.stop_tol * (1.0 + r0.matrix().frobenius());

    PsdOperator r = r0;
    if (cfg.keep_iterates) trace.iterates.push_back(r);
    bool prev_small = false;
    for (int n = 0; n < cfg.max_iter; ++n) {
        const Projection& p = step_projection(n, pa, pb);
        const PsdOperator root = psd_sqrt(r);
        const Eigen::MatrixXd comp =
            Eigen::MatrixXd::Identity(r.dim(), r.dim()) - p.mat();
        PsdOperator next(symmetrize(root.mat() * comp * root.mat()));
        if (cfg.ledger_enabled) {
            // D_n from the defining formula; run_flow's caller cross-checks
            // it against R_n - R_{n+1}
            trace.dissipation.emplace_back(
                symmetrize(root.mat() * p.mat() * root.mat()));
        }
        const double delta = (next.mat() - r.mat()).norm();
        trace.deltas.push_back(delta);
        r = next;
        ++trace.iterate_count;
        if (cfg.keep_iterates) trace.iterates.push_back(r);
        if (delta <= threshold) {
            if (prev_small) {
                trace.converged = true;
                break;
            }
            prev_small = true;
        } else {
            prev_small = false;
        }
    }
    trace.r_inf = r;
    return trace;
}

EnergyReport energy_report(const FlowTrace& trace) {
    if (!trace.ledger_enabled) {
        throw LedgerMissing("energy_report: trace has no dissipation ledger");
    }
    const int d = trace.r0.dim();
    Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(d, d);
    for (const SymmetricMatrix& dn : trace.dissipation) {
        sum += dn.mat();
    }
    SymmetricMatrix partial(sum);
    const double residual =
        (trace.r0.mat() - trace.r_inf.mat() - partial.mat()).norm();
    return {partial, residual, partial.trace(), trace.r_inf.matrix().trace()};
}

double fixed_point_residual(const PsdOperator& r, const Projection& p) {
    return (residual_map(r, p).mat() - r.mat()).norm();
}

double support_residual(const PsdOperator& r, const Projection& pa, const Projection& pb) {
    if (r.dim() != pa.dim() || r.dim() != pb.dim()) {
        throw DimensionMismatch("support_residual: dimension mismatch");
    }
    return std::max((pa.mat() * r.mat()).norm(), (pb.mat() * r.mat()).norm());
}

} // namespace wrflow
