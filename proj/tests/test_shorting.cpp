#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "wrflow/rng.hpp"
#include "wrflow/shorting.hpp"

using namespace wrflow;

namespace {

Eigen::MatrixXd worked_r0() {
    Eigen::MatrixXd m(2, 2);
    m << 5, 3, 3, 2;
    return m;
}

Subspace span_e2() {
    Eigen::MatrixXd b(2, 1);
    b << 0, 1;
    return Subspace(2, b);
}

PsdOperator random_psd(CounterRng& rng, int d, int rank = -1) {
    if (rank < 0) rank = d;
    Eigen::MatrixXd a(d, rank);
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < rank; ++j) a(i, j) = rng.gaussian();
    }
    return PsdOperator(symmetrize(a * a.transpose()));
}

Subspace random_subspace(CounterRng& rng, int d, int rank) {
    if (rank == 0) return Subspace::trivial(d);
    Eigen::MatrixXd g(d, rank);
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < rank; ++j) g(i, j) = rng.gaussian();
    }
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
    return Subspace(d, qr.householderQ() * Eigen::MatrixXd::Identity(d, rank));
}

} // namespace

TEST_CASE("block_decompose in the (K, K-perp) frame") {
    PsdOperator r0(worked_r0());
    BlockDecomposition bd = block_decompose(r0, span_e2());
    REQUIRE(bd.a_block.rows() == 1);
    CHECK(bd.a_block(0, 0) == doctest::Approx(2.0));
    CHECK(std::abs(bd.b_block(0, 0)) == doctest::Approx(3.0));
    CHECK(bd.c_block(0, 0) == doctest::Approx(5.0));

    BlockDecomposition full = block_decompose(r0, Subspace::full(2));
    CHECK((full.a_block - r0.mat()).norm() < 1e-14);
    CHECK(full.c_block.rows() == 0);

    BlockDecomposition none = block_decompose(r0, Subspace::trivial(2));
    CHECK((none.c_block - r0.mat()).norm() < 1e-14);
    CHECK(none.a_block.rows() == 0);

    // reassembly reproduces R0
    Eigen::MatrixXd frame(2, 2);
    frame.leftCols(1) = bd.k_basis.basis();
    frame.rightCols(1) = bd.k_perp_basis.basis();
    Eigen::MatrixXd blocks(2, 2);
    blocks(0, 0) = bd.a_block(0, 0);
    blocks(0, 1) = bd.b_block(0, 0);
    blocks(1, 0) = bd.b_block(0, 0);
    blocks(1, 1) = bd.c_block(0, 0);
    CHECK((frame * blocks * frame.transpose() - r0.mat()).norm() <
          1e-12 * (1.0 + r0.matrix().frobenius()));
}

TEST_CASE("shorted_schur on the worked example") {
    PsdOperator r0(worked_r0());
    PsdOperator s = shorted_schur(r0, span_e2());
    Eigen::MatrixXd expected = Eigen::Vector2d(0, 0.2).asDiagonal();
    CHECK((s.mat() - expected).norm() < 1e-12);

    CHECK((shorted_schur(r0, Subspace::full(2)).mat() - r0.mat()).norm() < 1e-13);
    CHECK(shorted_schur(r0, Subspace::trivial(2)).mat().norm() == 0.0);
}

TEST_CASE("subspace_m") {
    PsdOperator r0(worked_r0());
    Subspace m = subspace_m(r0, span_e2());
    REQUIRE(m.rank() == 1);
    // u with R0^{1/2} u parallel to e2: first row of [[2,1],[1,1]] kills it
    Eigen::VectorXd u = m.basis().col(0);
    CHECK(std::abs(2.0 * u(0) + u(1)) < 1e-12);

    // R0 = I makes M = K
    PsdOperator eye(Eigen::MatrixXd::Identity(3, 3));
    CounterRng rng(31, 0);
    Subspace k = random_subspace(rng, 3, 2);
    Subspace mk = subspace_m(eye, k);
    CHECK(mk.rank() == 2);
    CHECK((mk.projection().mat() - k.projection().mat()).norm() < 1e-12);

    // invertible R0, K = {0}: no admissible direction
    CHECK(subspace_m(r0, Subspace::trivial(2)).rank() == 0);
}

TEST_CASE("shorted_intrinsic agrees with the Schur path") {
    PsdOperator r0(worked_r0());
    ShortedResult res = shorted_intrinsic(r0, span_e2());
    Eigen::MatrixXd expected = Eigen::Vector2d(0, 0.2).asDiagonal();
    CHECK((res.s.mat() - expected).norm() < 1e-10);
    CHECK(res.method_discrepancy < 1e-10);
    CHECK(res.m_subspace.rank() == 1);

    PsdOperator zero(SymmetricMatrix::zero(3));
    ShortedResult zres = shorted_intrinsic(zero, Subspace::trivial(3));
    CHECK(zres.s.mat().norm() == 0.0);
    CHECK(zres.m_subspace.rank() == 0);
}

TEST_CASE("property: Schur and intrinsic agree on random ensembles") {
    for (int trial = 0; trial < 200; ++trial) {
        CounterRng rng(32, static_cast<std::uint64_t>(trial));
        const int d = 2 + rng.uniform_int(6);
        PsdOperator r0 = random_psd(rng, d);
        Subspace k = random_subspace(rng, d, rng.uniform_int(d));
        ShortedResult res = shorted_intrinsic(r0, k);
        const double scale = 1.0 + r0.matrix().frobenius();
        CHECK(res.method_discrepancy <= 1e-8 * scale);
        // 0 <= S <= R0, support inside K
        CHECK(loewner_leq(SymmetricMatrix::zero(d), res.s.matrix(), 1e-9 * scale).holds);
        CHECK(loewner_leq(res.s.matrix(), r0.matrix(), 1e-9 * scale).holds);
        CHECK(loewner_leq(support_projection(res.s).matrix(),
                          k.projection().matrix(), 1e-8)
                  .holds);
    }
}

TEST_CASE("variational_value on the worked example") {
    PsdOperator r0(worked_r0());
    CHECK(variational_value(r0, span_e2(), Eigen::Vector2d(0, 1)) ==
          doctest::Approx(0.2).epsilon(1e-10));
    CHECK(variational_value(r0, span_e2(), Eigen::Vector2d(0, 0)) == 0.0);
    CHECK_THROWS_AS(variational_value(r0, span_e2(), Eigen::Vector2d(1, 1)), NotInK);
}

TEST_CASE("property: variational value is the infimum over K-perp shifts") {
    for (int trial = 0; trial < 20; ++trial) {
        CounterRng rng(33, static_cast<std::uint64_t>(trial));
        const int d = 3;
        PsdOperator r0 = random_psd(rng, d);
        Subspace k = random_subspace(rng, d, 1 + rng.uniform_int(d - 1));
        ShortedResult res = shorted_intrinsic(r0, k);
        Eigen::VectorXd alpha(k.rank());
        for (int i = 0; i < k.rank(); ++i) alpha(i) = rng.gaussian();
        const Eigen::VectorXd x = k.basis() * alpha;
        const double value = variational_value(r0, k, x);
        CHECK(value == doctest::Approx(x.dot(res.s.mat() * x))
                           .epsilon(1e-8 * (1.0 + r0.matrix().frobenius())));
        Subspace kp = orthogonal_complement(k);
        for (int sample = 0; sample < 1000; ++sample) {
            Eigen::VectorXd beta(kp.rank());
            for (int i = 0; i < kp.rank(); ++i) beta(i) = 3.0 * rng.gaussian();
            const Eigen::VectorXd z = x + kp.basis() * beta;
            CHECK(z.dot(r0.mat() * z) >= value - 1e-9);
        }
    }
}

TEST_CASE("maximality: pushing past S in a K-direction breaks the order") {
    // worked example: R0 - S is singular, any extra mass on e2 tips it
    PsdOperator r0(worked_r0());
    ShortedResult res = shorted_intrinsic(r0, span_e2());
    Eigen::MatrixXd bumped = res.s.mat();
    bumped(1, 1) += 1e-3 * r0.matrix().frobenius();
    CHECK_FALSE(loewner_leq(SymmetricMatrix(bumped), r0.matrix(), 1e-12).holds);
}

TEST_CASE("S = 0 exactly when M = {0}") {
    for (int trial = 0; trial < 50; ++trial) {
        CounterRng rng(34, static_cast<std::uint64_t>(trial));
        const int d = 2 + rng.uniform_int(4);
        PsdOperator r0 = random_psd(rng, d); // invertible a.s.
        Subspace k = Subspace::trivial(d);
        ShortedResult res = shorted_intrinsic(r0, k);
        CHECK(res.m_subspace.rank() == 0);
        CHECK(res.s.matrix().frobenius() < 1e-10);
    }
}
