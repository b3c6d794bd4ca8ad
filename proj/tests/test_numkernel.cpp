#include <catch2/catch_amalgamated.hpp>

#include <Eigen/Dense>

#include <cmath>
#include <random>

#include "agcd/numkernel.hpp"
#include "oracles.hpp"

namespace {

Eigen::MatrixXd seeded_random(int rows, int cols, unsigned seed) {
    std::mt19937 rng(seed);
    std::normal_distribution<double> g;
    Eigen::MatrixXd m(rows, cols);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) m(r, c) = g(rng);
    return m;
}

}  // namespace

TEST_CASE("svd reconstructs and orders", "[numkernel]") {
    const Eigen::MatrixXd m = seeded_random(9, 6, 1);
    const agcd::SvdResult sv = agcd::svd(m);
    REQUIRE(sv.sigmas.size() == 6);
    CHECK((sv.u * sv.sigmas.asDiagonal() * sv.v.transpose() - m).norm() < 1e-12 * m.norm());
    for (int i = 1; i < 6; ++i) CHECK(sv.sigmas(i) <= sv.sigmas(i - 1));
    CHECK((sv.u.transpose() * sv.u - Eigen::MatrixXd::Identity(6, 6)).norm() < 1e-12);
    CHECK((sv.v.transpose() * sv.v - Eigen::MatrixXd::Identity(6, 6)).norm() < 1e-12);
}

TEST_CASE("svd sign convention is reproducible", "[numkernel]") {
    const Eigen::MatrixXd m = seeded_random(8, 5, 2);
    const agcd::SvdResult s1 = agcd::svd(m);
    const agcd::SvdResult s2 = agcd::svd(m);
    CHECK((s1.u - s2.u).norm() == 0.0);
    CHECK((s1.v - s2.v).norm() == 0.0);
    for (int i = 0; i < 5; ++i) {
        Eigen::Index arg;
        s1.u.col(i).cwiseAbs().maxCoeff(&arg);
        CHECK(s1.u(arg, i) > 0.0);
    }
}

TEST_CASE("svd rejects non-finite input", "[numkernel]") {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(2, 2);
    m(1, 1) = std::nan("");
    CHECK_THROWS_AS(agcd::svd(m), agcd::NumericError);
}

TEST_CASE("smallest triplets ascend and satisfy the resolvent equations", "[numkernel]") {
    const Eigen::MatrixXd m = seeded_random(10, 7, 3);
    const auto triplets = agcd::smallest_triplets(m, 3);
    REQUIRE(triplets.size() == 3);
    for (int i = 0; i < 3; ++i) {
        const auto& t = triplets[i];
        CHECK((m * t.v - t.sigma * t.u).norm() < 1e-12 * m.norm());
        CHECK((m.transpose() * t.u - t.sigma * t.v).norm() < 1e-12 * m.norm());
        if (i > 0) CHECK(t.sigma >= triplets[i - 1].sigma);
    }
    CHECK_THROWS_AS(agcd::smallest_triplets(m, 0), agcd::ParameterError);
    CHECK_THROWS_AS(agcd::smallest_triplets(m, 8), agcd::ParameterError);
}

TEST_CASE("least squares agrees with normal equations when well posed", "[numkernel]") {
    const Eigen::MatrixXd a = seeded_random(12, 5, 4);
    const Eigen::MatrixXd rhs = seeded_random(12, 3, 5);
    const Eigen::MatrixXd x = agcd::least_squares(a, rhs);
    const Eigen::MatrixXd y = oracles::normal_equation_solve(a, rhs);
    CHECK((x - y).norm() < 1e-10 * y.norm());
}

TEST_CASE("least squares returns the minimum-norm solution", "[numkernel]") {
    // Wide system: solution must be orthogonal to the null space of a.
    const Eigen::MatrixXd a = seeded_random(4, 9, 6);
    const Eigen::VectorXd rhs = seeded_random(4, 1, 7);
    const Eigen::VectorXd x = agcd::least_squares(a, rhs);
    CHECK((a * x - rhs).norm() < 1e-10);
    Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
    const Eigen::MatrixXd null_basis = lu.kernel();
    CHECK((null_basis.transpose() * x).norm() < 1e-10);
    CHECK_THROWS_AS(agcd::least_squares(a, seeded_random(5, 1, 8)), agcd::DimensionError);
}
