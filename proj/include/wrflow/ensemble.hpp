#ifndef WRFLOW_ENSEMBLE_HPP
#define WRFLOW_ENSEMBLE_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "wrflow/flow.hpp"
#include "wrflow/psd_core.hpp"

namespace wrflow {

struct EnsembleConfig {
    int dim = 4;
    int count = 100;
    std::uint64_t seed = 0;
    int jobs = 1;
    bool commuting = false; // draw R0, pa, pb in a shared eigenbasis
    FlowConfig flow;
};

struct EnsembleRow {
    std::uint64_t seed = 0;
    int dim = 0;
    int trial = 0;
    double comm_r0_pa = 0.0;
    double comm_r0_pb = 0.0;
    double comm_pa_pb = 0.0;
    int iterations = 0;
    double gap_fro = 0.0;
    double dissipated_trace = 0.0;
    double surviving_trace = 0.0;
    bool converged = false;
    std::string status = "ok"; // per-trial failures recorded, never thrown
};

struct EnsembleDraw {
    PsdOperator r0;
    Projection pa;
    Projection pb;
};

// Pure function of (seed, dim, trial, commuting): R0 = A^T A with standard
// normal A, projections from orthonormalized Gaussian frames with rank
// uniform on [0, d].
EnsembleDraw draw_trial(std::uint64_t seed, int dim, int trial, bool commuting);

EnsembleRow run_trial(const EnsembleConfig& cfg, int trial);

// Rows ordered by trial index regardless of cfg.jobs.
std::vector<EnsembleRow> run_ensemble(const EnsembleConfig& cfg);

std::string ensemble_header();
std::string ensemble_row_csv(const EnsembleRow& row);
void write_ensemble(const std::string& path, const std::vector<EnsembleRow>& rows);

} // namespace wrflow

#endif
