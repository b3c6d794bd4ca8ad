#include <catch2/catch_amalgamated.hpp>

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "agcd/control.hpp"
#include "agcd/matpoly.hpp"
#include "agcd/subspace.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using agcd::IoSystem;
using agcd::MatPoly;

namespace {

Eigen::MatrixXd ones1(double v) { return v * Eigen::MatrixXd::Ones(1, 1); }

// SISO system with monic cubic P and random Q, coefficients from one seed.
IoSystem random_siso3(unsigned seed) {
    std::mt19937 rng(seed);
    std::normal_distribution<double> g;
    const MatPoly p({ones1(g(rng)), ones1(g(rng)), ones1(g(rng)), ones1(1.0)});
    const MatPoly q({ones1(g(rng)), ones1(g(rng)), ones1(g(rng)), ones1(g(rng))});
    return IoSystem(p, q);
}

MatPoly random_monic(int size, int degree, unsigned seed) {
    std::mt19937 rng(seed);
    std::normal_distribution<double> g;
    std::vector<Eigen::MatrixXd> cs;
    for (int j = 0; j < degree; ++j) {
        Eigen::MatrixXd c(size, size);
        for (int r = 0; r < size; ++r)
            for (int col = 0; col < size; ++col) c(r, col) = g(rng);
        cs.push_back(std::move(c));
    }
    cs.push_back(Eigen::MatrixXd::Identity(size, size));
    return MatPoly(std::move(cs));
}

}  // namespace

TEST_CASE("system validation", "[control]") {
    const MatPoly p({fixtures::mat2(0, 0, 0, 0), Eigen::MatrixXd::Identity(2, 2)});
    const MatPoly q = MatPoly::zero(2, 1, 1);
    CHECK_NOTHROW(IoSystem(p, q));
    CHECK_THROWS_AS(IoSystem(MatPoly::zero(2, 3, 1), q), agcd::DimensionError);
    CHECK_THROWS_AS(IoSystem(p, MatPoly::zero(3, 1, 1)), agcd::DimensionError);
    // A zero top coefficient trims away, so only a genuinely higher-degree
    // input polynomial violates the degree bound.
    CHECK_NOTHROW(IoSystem(p, MatPoly::zero(2, 1, 2)));
    const MatPoly qdeep({Eigen::MatrixXd::Zero(2, 1), Eigen::MatrixXd::Zero(2, 1),
                         Eigen::MatrixXd::Ones(2, 1)});
    CHECK_THROWS_AS(IoSystem(p, qdeep), agcd::ParameterError);
    const MatPoly nonmonic({fixtures::mat2(0, 0, 0, 0), fixtures::mat2(2, 0, 0, 1)});
    CHECK_THROWS_AS(IoSystem(nonmonic, q), agcd::ParameterError);
    CHECK_NOTHROW(IoSystem(nonmonic, q, false));
}

TEST_CASE("coprime scalar system is controllable", "[control]") {
    // P = z - 0.5, Q = 1.
    const MatPoly p({ones1(-0.5), ones1(1.0)});
    const MatPoly q({ones1(1.0)});
    const agcd::ControllabilityReport rep = agcd::is_controllable(IoSystem(p, q));
    CHECK(rep.controllable);
    CHECK(rep.margin > 1e-3);
}

TEST_CASE("planted left factor destroys controllability", "[control]") {
    const MatPoly c = random_monic(2, 1, 3);
    const MatPoly pbar = random_monic(2, 1, 4);
    const MatPoly qbar = MatPoly({fixtures::mat2(1, 0, 2, 1), fixtures::mat2(0, 1, 1, 0)});
    const IoSystem sys(agcd::mul(c, pbar), agcd::mul(c, qbar));
    const agcd::ControllabilityReport rep = agcd::is_controllable(sys);
    CHECK_FALSE(rep.controllable);
    CHECK(rep.margin < 1e-10);
}

TEST_CASE("generic systems are controllable", "[control]") {
    int controllable = 0;
    for (unsigned seed = 0; seed < 50; ++seed)
        if (agcd::is_controllable(random_siso3(seed)).controllable) ++controllable;
    CHECK(controllable == 50);
}

TEST_CASE("uncontrollable input reports distance zero", "[control]") {
    const MatPoly c = random_monic(2, 1, 7);
    const MatPoly pbar = random_monic(2, 1, 8);
    const MatPoly qbar({fixtures::mat2(1, -1, 0, 2), fixtures::mat2(2, 0, 1, 1)});
    const IoSystem sys(agcd::mul(c, pbar), agcd::mul(c, qbar));
    const agcd::UncontrollabilityResult r = agcd::distance_to_uncontrollability(sys);
    CHECK(r.converged);
    CHECK(r.distance == 0.0);
    CHECK(agcd::coefficient_distance(r.witness.p_poly, sys.p_poly) == 0.0);
}

TEST_CASE("scalar distance matches the direct oracle", "[control]") {
    const IoSystem sys = random_siso3(11);
    const agcd::UncontrollabilityResult r = agcd::distance_to_uncontrollability(sys);
    REQUIRE(r.converged);
    Eigen::VectorXd p(4), q(4);
    for (int j = 0; j < 4; ++j) {
        p(j) = sys.p_poly.coeff(j)(0, 0);
        q(j) = j <= sys.q_poly.degree() ? sys.q_poly.coeff(j)(0, 0) : 0.0;
    }
    const double oracle = oracles::scalar_noncoprime_distance(p, q);
    CHECK(r.distance <= oracle * 1.05);
    CHECK(r.distance >= oracle * 0.98);
    CHECK_FALSE(agcd::is_controllable(r.witness, 1e-8).controllable);
    CHECK(std::isfinite(r.monic_distance));
}

TEST_CASE("solver distance is bounded by fitted planted witnesses", "[control]") {
    const IoSystem sys = random_siso3(13);
    const agcd::UncontrollabilityResult r = agcd::distance_to_uncontrollability(sys);
    REQUIRE(r.converged);
    for (unsigned seed = 20; seed < 24; ++seed) {
        // Plant a random degree-1 left factor, fit cofactors by least
        // squares; that witness is uncontrollable, so it upper-bounds the
        // minimal distance.
        const MatPoly c = random_monic(1, 1, seed);
        auto [triple, fit_distance] = agcd::recover_cofactors(sys.transposed_pair(),
                                                              agcd::transpose(c));
        CHECK(r.distance <= fit_distance + 1e-9);
    }
}

TEST_CASE("distance is bounded by the remaining offset along a line onto the "
          "uncontrollable set",
          "[control]") {
    // Endpoint: P = (z-0.3)(z^2+z+2), Q = (z-0.3)(z^2+1), sharing z-0.3.
    const MatPoly pend({ones1(-0.6), ones1(1.7), ones1(0.7), ones1(1.0)});
    const MatPoly qend({ones1(-0.3), ones1(1.0), ones1(-0.3), ones1(1.0)});
    // Fixed offset on the non-leading coefficients, shrinking linearly. The
    // distance need not decay monotonically (the nearest degenerate system
    // shifts as the line moves), but the endpoint caps it from above.
    const double dp[4] = {0.4, -0.2, 0.1, 0.0};
    const double dq[4] = {0.2, 0.3, -0.1, 0.0};
    double line_norm = 0.0;
    for (int j = 0; j < 4; ++j) line_norm += dp[j] * dp[j] + dq[j] * dq[j];
    line_norm = std::sqrt(line_norm);
    double last = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= 4; ++i) {
        const double t = i / 4.0;
        std::vector<Eigen::MatrixXd> pcs, qcs;
        Eigen::VectorXd pv(4), qv(4);
        for (int j = 0; j < 4; ++j) {
            pcs.push_back(pend.coeff(j) + (1 - t) * ones1(dp[j]));
            qcs.push_back(qend.coeff(j) + (1 - t) * ones1(dq[j]));
            pv(j) = pcs.back()(0, 0);
            qv(j) = qcs.back()(0, 0);
        }
        const IoSystem sys{MatPoly(pcs), MatPoly(qcs)};
        const agcd::UncontrollabilityResult r = agcd::distance_to_uncontrollability(sys);
        CHECK(r.distance <= (1 - t) * line_norm + 1e-9);
        if (t < 1.0) {
            const double oracle = oracles::scalar_noncoprime_distance(pv, qv);
            CHECK(r.distance <= oracle * 1.05);
            CHECK(r.distance >= oracle * 0.98);
        }
        last = r.distance;
    }
    CHECK(last < 1e-7);
}
