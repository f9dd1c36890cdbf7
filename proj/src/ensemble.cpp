#include "wrflow/ensemble.hpp"

#include <atomic>
#include <fstream>
#include <sstream>
#include <thread>

#include "wrflow/compare.hpp"
#include "wrflow/report.hpp"
#include "wrflow/rng.hpp"

namespace wrflow {

namespace {

Eigen::MatrixXd gaussian_matrix(CounterRng& rng, int rows, int cols) {
    Eigen::MatrixXd m(rows, cols);
    for (int i = 0; i < rows; ++i) {
        for (int j = 0; j < cols; ++j) {
            m(i, j) = rng.gaussian();
        }
    }
    return m;
}

// Orthonormal frame from a Gaussian draw; full rank almost surely.
Eigen::MatrixXd gaussian_frame(CounterRng& rng, int dim, int rank) {
    if (rank == 0) return Eigen::MatrixXd(dim, 0);
    const Eigen::MatrixXd g = gaussian_matrix(rng, dim, rank);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
    return qr.householderQ() * Eigen::MatrixXd::Identity(dim, rank);
}

Projection frame_projection(const Eigen::MatrixXd& q, int dim) {
    if (q.cols() == 0) return Projection::zero(dim);
    return Projection(SymmetricMatrix(symmetrize(q * q.transpose())));
}

} // namespace

EnsembleDraw draw_trial(std::uint64_t seed, int dim, int trial, bool commuting) {
    CounterRng rng(seed, static_cast<std::uint64_t>(trial));
    if (!commuting) {
        const Eigen::MatrixXd a = gaussian_matrix(rng, dim, dim);
        PsdOperator r0(symmetrize(a.transpose() * a));
        const int rank_a = rng.uniform_int(dim);
        const int rank_b = rng.uniform_int(dim);
        Projection pa = frame_projection(gaussian_frame(rng, dim, rank_a), dim);
        Projection pb = frame_projection(gaussian_frame(rng, dim, rank_b), dim);
        return {std::move(r0), std::move(pa), std::move(pb)};
    }
    // shared eigenbasis: diagonal data conjugated by one random orthogonal frame
    const Eigen::MatrixXd q = gaussian_frame(rng, dim, dim);
    Eigen::VectorXd evals(dim);
    for (int i = 0; i < dim; ++i) {
        const double g = rng.gaussian();
        evals(i) = g * g; // chi-squared, nonnegative
    }
    const int rank_a = rng.uniform_int(dim);
    const int rank_b = rng.uniform_int(dim);
    Eigen::VectorXd da = Eigen::VectorXd::Zero(dim);
    Eigen::VectorXd db = Eigen::VectorXd::Zero(dim);
    // random eigenvalue subsets of the shared basis
    for (int r = 0; r < rank_a; ++r) {
        int idx = rng.uniform_int(dim - 1);
        while (da(idx) == 1.0) idx = (idx + 1) % dim;
        da(idx) = 1.0;
    }
    for (int r = 0; r < rank_b; ++r) {
        int idx = rng.uniform_int(dim - 1);
        while (db(idx) == 1.0) idx = (idx + 1) % dim;
        db(idx) = 1.0;
    }
    PsdOperator r0(symmetrize(q * evals.asDiagonal() * q.transpose()));
    Projection pa(SymmetricMatrix(symmetrize(q * da.asDiagonal() * q.transpose())));
    Projection pb(SymmetricMatrix(symmetrize(q * db.asDiagonal() * q.transpose())));
    return {std::move(r0), std::move(pa), std::move(pb)};
}

EnsembleRow run_trial(const EnsembleConfig& cfg, int trial) {
    EnsembleRow row;
    row.seed = cfg.seed;
    row.dim = cfg.dim;
    row.trial = trial;
    try {
        const EnsembleDraw draw = draw_trial(cfg.seed, cfg.dim, trial, cfg.commuting);
        const CompareOutcome out = run_compare(draw.r0, draw.pa, draw.pb, cfg.flow);
        row.comm_r0_pa = out.comm_r0_pa;
        row.comm_r0_pb = out.comm_r0_pb;
        row.comm_pa_pb = out.comm_pa_pb;
        row.iterations = out.trace.iterate_count;
        row.gap_fro = (out.shorted.s.mat() - out.trace.r_inf.mat()).norm();
        row.dissipated_trace = out.dissipated_trace;
        row.surviving_trace = out.surviving_trace;
        row.converged = out.trace.converged;
    } catch (const std::exception& e) {
        std::string msg = e.what();
        for (char& c : msg) {
            if (c == ',' || c == '\n') c = ';';
        }
        row.status = "error: " + msg;
    }
    return row;
}

std::vector<EnsembleRow> run_ensemble(const EnsembleConfig& cfg) {
    std::vector<EnsembleRow> rows(static_cast<size_t>(cfg.count));
    const int jobs = std::max(cfg.jobs, 1);
    if (jobs == 1) {
        for (int t = 0; t < cfg.count; ++t) rows[static_cast<size_t>(t)] = run_trial(cfg, t);
        return rows;
    }
    std::atomic<int> next{0};
    auto worker = [&]() {
        for (;;) {
            const int t = next.fetch_add(1);
            if (t >= cfg.count) return;
            rows[static_cast<size_t>(t)] = run_trial(cfg, t);
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(jobs));
    for (int i = 0; i < jobs; ++i) pool.emplace_back(worker);
    for (std::thread& th : pool) th.join();
    return rows;
}

std::string ensemble_header() {
    return "trial,seed,dim,comm_r0_pa,comm_r0_pb,comm_pa_pb,iterations,"
           "gap_fro,dissipated_trace,surviving_trace,converged,status";
}

std::string ensemble_row_csv(const EnsembleRow& row) {
    std::ostringstream os;
    os << row.trial << "," << row.seed << "," << row.dim << ","
       << format_real(row.comm_r0_pa) << "," << format_real(row.comm_r0_pb) << ","
       << format_real(row.comm_pa_pb) << "," << row.iterations << ","
       << format_real(row.gap_fro) << "," << format_real(row.dissipated_trace) << ","
       << format_real(row.surviving_trace) << ","
       << (row.converged ? "true" : "false") << "," << row.status;
    return os.str();
}

void write_ensemble(const std::string& path, const std::vector<EnsembleRow>& rows) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open ensemble output: " + path);
    out << ensemble_header() << "\n";
    for (const EnsembleRow& row : rows) {
        out << ensemble_row_csv(row) << "\n";
    }
    if (!out) throw IoError("ensemble write failed: " + path);
}

} // namespace wrflow
