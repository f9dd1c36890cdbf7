#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "wrflow/compare.hpp"
#include "wrflow/ensemble.hpp"
#include "wrflow/matrix_io.hpp"
#include "wrflow/report.hpp"

using namespace wrflow;

namespace {

struct TempFile {
    std::string path;
    explicit TempFile(const std::string& name)
        : path(std::string("/tmp/wrflow_test_") + name) {}
    ~TempFile() { std::remove(path.c_str()); }
};

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    out << text;
}

} // namespace

TEST_CASE("parse_matrix_file on the worked-example operator") {
    TempFile f("r0.txt");
    write_text(f.path, "dim = 2\nkind = psd\nentries = 5 3 3 2\n");
    SymmetricMatrix m = parse_matrix_file(f.path);
    CHECK(m.dim() == 2);
    CHECK(m.mat()(0, 0) == 5.0);
    CHECK(m.mat()(0, 1) == 3.0);
}

TEST_CASE("parse_matrix_file rejects indefinite psd files with the eigenvalue") {
    TempFile f("swap.txt");
    write_text(f.path, "dim = 2\nkind = psd\nentries = 0 1 1 0\n");
    try {
        parse_matrix_file(f.path);
        FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("psd") != std::string::npos);
        CHECK(msg.find("-1") != std::string::npos);
    }
}

TEST_CASE("parse_matrix_file handles 1x1 projection and malformed input") {
    TempFile f("p1.txt");
    write_text(f.path, "dim = 1\nkind = projection\nentries = 1\n");
    Projection p{parse_matrix_file(f.path)};
    CHECK(p.rank() == 1);

    TempFile g("bad.txt");
    write_text(g.path, "dim = 2\nkind = psd\nentries = 1 2 3\n");
    CHECK_THROWS_AS(parse_matrix_file(g.path), ParseError);

    CHECK_THROWS_AS(parse_matrix_file("/nonexistent/file"), IoError);
}

TEST_CASE("matrix file round-trip") {
    TempFile f("roundtrip.txt");
    Eigen::MatrixXd m(2, 2);
    m << 1.0 / 3.0, 0.1, 0.1, 2.0 / 7.0;
    write_matrix_file(f.path, SymmetricMatrix(m), MatrixKind::Psd);
    SymmetricMatrix back = parse_matrix_file(f.path);
    CHECK((back.mat() - m).norm() == 0.0);
}

TEST_CASE("resolve_projection") {
    Projection z = resolve_projection("zero", 2);
    CHECK(z.rank() == 0);
    Projection id = resolve_projection("identity", 3);
    CHECK(id.rank() == 3);
    Projection pa = resolve_projection("span:1,0", 2);
    CHECK((pa.mat() - Eigen::MatrixXd(Eigen::Vector2d(1, 0).asDiagonal())).norm() <
          1e-14);
    Projection two = resolve_projection("span:1,0,0;0,1,0", 3);
    CHECK(two.rank() == 2);
    CHECK_THROWS_AS(resolve_projection("span:1,0", 3), ValidationError);
    CHECK_THROWS_AS(resolve_projection("span:1,x", 2), ParseError);
}

TEST_CASE("report round-trips losslessly at 17 digits") {
    Report rep;
    rep.set_int("input.dim", 2);
    rep.set_real("gap.fro", 0.2);
    rep.set_real("odd", 1.0 / 3.0);
    rep.set_flag("flow.converged", true);
    Eigen::MatrixXd m(2, 2);
    m << 5, 3, 3, 2.0000000000000004;
    rep.set_matrix("flow.r_inf", m);
    rep.set_string("schedule", "even:B odd:A");

    Report back = Report::parse(rep.serialize());
    CHECK(back == rep);
    CHECK(back.get_real("odd") == 1.0 / 3.0);
    CHECK(back.get_matrix("flow.r_inf")(1, 1) == 2.0000000000000004);
    CHECK(back.get_flag("flow.converged"));

    CHECK_THROWS_AS(rep.write("/nonexistent-dir/report.txt"), IoError);
    try {
        rep.write("/nonexistent-dir/report.txt");
    } catch (const IoError& e) {
        CHECK(std::string(e.what()).find("/nonexistent-dir/report.txt") !=
              std::string::npos);
    }
}

TEST_CASE("compare report carries the worked-example gap") {
    Eigen::MatrixXd m(2, 2);
    m << 5, 3, 3, 2;
    PsdOperator r0(m);
    Projection pa = resolve_projection("span:1,0", 2);
    Projection pb = Projection::zero(2);
    FlowConfig cfg;
    CompareOutcome out = run_compare(r0, pa, pb, cfg);
    Report rep = compare_report(r0, pa, pb, out, cfg);
    CHECK(rep.get_real("gap.fro") == doctest::Approx(0.2).epsilon(1e-9));
    CHECK_FALSE(rep.get_flag("gap.equality"));
    // reports are self-describing
    CHECK(rep.has("config.stop_tol"));
    CHECK(rep.has("config.rank_tol"));

    // determinism: rebuilding the report gives identical text
    CompareOutcome out2 = run_compare(r0, pa, pb, cfg);
    Report rep2 = compare_report(r0, pa, pb, out2, cfg);
    CHECK(rep.serialize_without_timings() == rep2.serialize_without_timings());
}

TEST_CASE("ensemble rows are a pure function of (seed, dim, trial)") {
    EnsembleConfig cfg;
    cfg.dim = 2;
    cfg.count = 1;
    cfg.seed = 7;
    auto rows_a = run_ensemble(cfg);
    auto rows_b = run_ensemble(cfg);
    REQUIRE(rows_a.size() == 1);
    CHECK(ensemble_row_csv(rows_a[0]) == ensemble_row_csv(rows_b[0]));
}

TEST_CASE("ensemble parallelism does not change content or order") {
    EnsembleConfig cfg;
    cfg.dim = 3;
    cfg.count = 12;
    cfg.seed = 99;
    cfg.jobs = 1;
    auto serial = run_ensemble(cfg);
    cfg.jobs = 4;
    auto parallel = run_ensemble(cfg);
    REQUIRE(serial.size() == parallel.size());
    for (size_t i = 0; i < serial.size(); ++i) {
        CHECK(ensemble_row_csv(serial[i]) == ensemble_row_csv(parallel[i]));
    }
}

TEST_CASE("ensemble sandwich: gap never significantly negative") {
    EnsembleConfig cfg;
    cfg.dim = 4;
    cfg.count = 25;
    cfg.seed = 5;
    for (const EnsembleRow& row : run_ensemble(cfg)) {
        CHECK(row.status == "ok");
        CHECK(row.gap_fro >= -1e-8);
    }
}

TEST_CASE("commuting ensemble closes the gap") {
    EnsembleConfig cfg;
    cfg.dim = 4;
    cfg.count = 20;
    cfg.seed = 6;
    cfg.commuting = true;
    for (const EnsembleRow& row : run_ensemble(cfg)) {
        CHECK(row.status == "ok");
        CHECK(row.gap_fro <= 1e-7 * (1.0 + row.dissipated_trace + row.surviving_trace));
    }
}
