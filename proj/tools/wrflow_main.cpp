#include <CLI11.hpp>
#include <chrono>
#include <iostream>

#include "wrflow/compare.hpp"
#include "wrflow/ensemble.hpp"
#include "wrflow/matrix_io.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitNoConvergence = 2;
constexpr int kExitMethodDisagreement = 3;
constexpr int kExitInvariant = 4;

struct CommonArgs {
    std::string r0_path;
    std::string pa_spec;
    std::string pb_spec;
    std::string k_path;
    std::string out_path;
    double tol = 1e-12;
    int max_iter = 10000;
    bool ledger = false;
};

void add_flow_flags(CLI::App* cmd, CommonArgs& args, bool need_projections) {
    cmd->add_option("--r0", args.r0_path, "initial PSD operator (matrix file)")
        ->required();
    auto* pa = cmd->add_option("--pa", args.pa_spec,
                               "projection P_A: file, span:..., zero, identity");
    auto* pb = cmd->add_option("--pb", args.pb_spec,
                               "projection P_B: file, span:..., zero, identity");
    if (need_projections) {
        pa->required();
        pb->required();
    }
    cmd->add_option("--tol", args.tol, "relative stopping tolerance");
    cmd->add_option("--max-iter", args.max_iter, "iteration cap");
    cmd->add_flag("--ledger", args.ledger, "record the dissipation ledger");
    cmd->add_option("--out", args.out_path, "write the report to this path");
}

void emit(const wrflow::Report& rep, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << rep.serialize();
    } else {
        rep.write(out_path);
    }
}

double elapsed_ms(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now() - start)
        .count();
}

int cmd_flow(const CommonArgs& args) {
    const wrflow::PsdOperator r0(wrflow::parse_matrix_file(args.r0_path));
    const wrflow::Projection pa = wrflow::resolve_projection(args.pa_spec, r0.dim());
    const wrflow::Projection pb = wrflow::resolve_projection(args.pb_spec, r0.dim());
    wrflow::FlowConfig cfg;
    cfg.stop_tol = args.tol;
    cfg.max_iter = args.max_iter;
    cfg.ledger_enabled = args.ledger;
    const auto start = std::chrono::steady_clock::now();
    const wrflow::FlowTrace trace = wrflow::run_flow(r0, pa, pb, cfg);
    wrflow::Report rep = wrflow::flow_report(r0, pa, pb, trace, cfg);
    rep.set_real("timing.flow_ms", elapsed_ms(start));
    emit(rep, args.out_path);
    return trace.converged ? kExitOk : kExitNoConvergence;
}

int cmd_short(const CommonArgs& args) {
    const wrflow::PsdOperator r0(wrflow::parse_matrix_file(args.r0_path));
    wrflow::Subspace k = wrflow::Subspace::trivial(r0.dim());
    if (!args.k_path.empty()) {
        // explicit K: the file holds the projection onto K
        const wrflow::Projection pk(wrflow::parse_matrix_file(args.k_path));
        if (pk.dim() != r0.dim()) {
            throw wrflow::ValidationError("subspace file dimension mismatch");
        }
        k = wrflow::kernel(wrflow::Projection(wrflow::SymmetricMatrix(
            Eigen::MatrixXd::Identity(r0.dim(), r0.dim()) - pk.mat())));
    } else {
        if (args.pa_spec.empty() || args.pb_spec.empty()) {
            throw wrflow::ValidationError("short: need --pa and --pb, or --k");
        }
        const wrflow::Projection pa = wrflow::resolve_projection(args.pa_spec, r0.dim());
        const wrflow::Projection pb = wrflow::resolve_projection(args.pb_spec, r0.dim());
        k = wrflow::kernel_intersection(pa, pb);
    }
    const auto start = std::chrono::steady_clock::now();
    const wrflow::ShortedResult shorted = wrflow::shorted_intrinsic(r0, k);
    wrflow::Report rep = wrflow::shorting_report(r0, shorted);
    rep.set_real("timing.short_ms", elapsed_ms(start));
    emit(rep, args.out_path);
    return kExitOk;
}

int cmd_compare(const CommonArgs& args) {
    const wrflow::PsdOperator r0(wrflow::parse_matrix_file(args.r0_path));
    const wrflow::Projection pa = wrflow::resolve_projection(args.pa_spec, r0.dim());
    const wrflow::Projection pb = wrflow::resolve_projection(args.pb_spec, r0.dim());
    wrflow::FlowConfig cfg;
    cfg.stop_tol = args.tol;
    cfg.max_iter = args.max_iter;
    const auto start = std::chrono::steady_clock::now();
    const wrflow::CompareOutcome out = wrflow::run_compare(r0, pa, pb, cfg);
    wrflow::check_compare_invariants(out);
    wrflow::Report rep = wrflow::compare_report(r0, pa, pb, out, cfg);
    rep.set_real("timing.compare_ms", elapsed_ms(start));
    emit(rep, args.out_path);
    return out.trace.converged ? kExitOk : kExitNoConvergence;
}

int cmd_ensemble(const wrflow::EnsembleConfig& cfg, const std::string& out_path) {
    const std::vector<wrflow::EnsembleRow> rows = wrflow::run_ensemble(cfg);
    if (out_path.empty()) {
        std::cout << wrflow::ensemble_header() << "\n";
        for (const wrflow::EnsembleRow& row : rows) {
            std::cout << wrflow::ensemble_row_csv(row) << "\n";
        }
    } else {
        wrflow::write_ensemble(out_path, rows);
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"alternating weighted residual flows, shorted operators, and their gap"};
    app.require_subcommand(1);

    CommonArgs flow_args;
    CLI::App* flow = app.add_subcommand("flow", "run the alternating residual flow");
    add_flow_flags(flow, flow_args, true);

    CommonArgs short_args;
    CLI::App* short_cmd =
        app.add_subcommand("short", "compute the shorted operator both ways");
    add_flow_flags(short_cmd, short_args, false);
    short_cmd->add_option("--k", short_args.k_path,
                          "explicit subspace K (projection matrix file)");

    CommonArgs compare_args;
    CLI::App* compare =
        app.add_subcommand("compare", "flow + shorting + intrinsic flow + gap");
    add_flow_flags(compare, compare_args, true);

    wrflow::EnsembleConfig ens_cfg;
    std::string ens_out;
    CLI::App* ensemble = app.add_subcommand("ensemble", "random-ensemble experiment sweep");
    ensemble->add_option("--dim", ens_cfg.dim, "ambient dimension")->required();
    ensemble->add_option("--count", ens_cfg.count, "number of trials")->required();
    std::uint64_t seed = 0;
    ensemble->add_option("--seed", seed, "ensemble seed")->required();
    ensemble->add_option("--jobs", ens_cfg.jobs, "parallel workers");
    ensemble->add_flag("--commuting", ens_cfg.commuting,
                       "draw R0, P_A, P_B in a shared eigenbasis");
    ensemble->add_option("--out", ens_out, "CSV output path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitInput;
    }

    try {
        if (flow->parsed()) return cmd_flow(flow_args);
        if (short_cmd->parsed()) return cmd_short(short_args);
        if (compare->parsed()) return cmd_compare(compare_args);
        ens_cfg.seed = seed;
        return cmd_ensemble(ens_cfg, ens_out);
    } catch (const wrflow::MethodDisagreement& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitMethodDisagreement;
    } catch (const wrflow::InvariantViolation& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvariant;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    }
}
