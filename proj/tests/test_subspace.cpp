#include <catch2/catch_amalgamated.hpp>

#include <Eigen/Dense>

#include <cmath>
#include <random>

#include "agcd/matpoly.hpp"
#include "agcd/subspace.hpp"
#include "agcd/sylvester.hpp"
#include "fixtures.hpp"

using agcd::MatPoly;
using agcd::PolyPair;

TEST_CASE("null space method recovers the planted factor from exact data", "[subspace]") {
    const PolyPair pair = fixtures::shared_factor_pair();
    auto [triple, diag] = agcd::subspace_gcd(pair, 1);
    const MatPoly expect = fixtures::shared_factor();
    CHECK(agcd::coefficient_distance(triple.c, expect) < 1e-10);
    CHECK(diag.residual < 1e-10);
    CHECK(diag.nullspace_gap > 1e8);
    REQUIRE(diag.k_matrix_singulars.size() == 2);
    CHECK(diag.k_matrix_singulars(0) < 1e-10);
    CHECK(diag.cofactor_distance < 1e-10);
}

TEST_CASE("null space method parameter checks", "[subspace]") {
    const PolyPair pair = fixtures::shared_factor_pair();
    CHECK_THROWS_AS(agcd::subspace_gcd(pair, 0), agcd::ParameterError);
    CHECK_THROWS_AS(agcd::subspace_gcd(pair, 2), agcd::ParameterError);
    CHECK_THROWS_AS(agcd::subspace_gcd(pair, 1, 2), agcd::ParameterError);
}

TEST_CASE("kernel residual identity", "[subspace]") {
    // ||tau(C) V||_F^2 equals the sum over columns of ||C_coeff H(v)||_F^2
    // for any C and any vectors: both sides evaluate the same convolution.
    std::mt19937 rng(17);
    std::normal_distribution<double> g;
    const int q = 2, d = 1, ell = 5;
    std::vector<Eigen::MatrixXd> cs;
    for (int j = 0; j <= d; ++j) {
        Eigen::MatrixXd c(q, q);
        for (int r = 0; r < q; ++r)
            for (int col = 0; col < q; ++col) c(r, col) = g(rng);
        cs.push_back(std::move(c));
    }
    const MatPoly c(cs);
    Eigen::MatrixXd c_coeff(q, q * (d + 1));
    for (int j = 0; j <= d; ++j) c_coeff.middleCols(q * (d - j), q) = c.coeff(j);

    const Eigen::MatrixXd tau = agcd::toeplitz_of(c, ell);
    double lhs = 0.0, rhs = 0.0;
    for (int col = 0; col < 3; ++col) {
        Eigen::VectorXd v(q * ell);
        for (int i = 0; i < v.size(); ++i) v(i) = g(rng);
        lhs += (tau * v).squaredNorm();
        rhs += (c_coeff * agcd::block_hankel(v, q, d)).squaredNorm();
    }
    CHECK(lhs == Catch::Approx(rhs).epsilon(1e-13));
}

TEST_CASE("cofactor recovery from the true factor", "[subspace]") {
    const PolyPair pair = fixtures::shared_factor_pair();
    auto [triple, distance] = agcd::recover_cofactors(pair, fixtures::shared_factor());
    CHECK(distance < 1e-12);
    CHECK(agcd::coefficient_distance(triple.abar, fixtures::shared_a_cofactor()) < 1e-10);
    CHECK(agcd::coefficient_distance(triple.bbar, fixtures::shared_b_cofactor()) < 1e-10);
}

TEST_CASE("cofactor recovery with a constant identity factor returns the pair", "[subspace]") {
    const PolyPair pair = fixtures::shared_factor_pair();
    auto [triple, distance] = agcd::recover_cofactors(pair, MatPoly::identity(2));
    CHECK(distance < 1e-13);
    CHECK(agcd::coefficient_distance(triple.abar, pair.a) < 1e-13);
    CHECK(agcd::coefficient_distance(triple.bbar, pair.b) < 1e-13);
}

TEST_CASE("elimination method on exact matrix data", "[subspace]") {
    const PolyPair pair = fixtures::shared_factor_pair();
    agcd::EchelonDiagnostics diag;
    const MatPoly c = agcd::exact_gcd_echelon(pair, {}, &diag);
    CHECK(agcd::coefficient_distance(agcd::monic_normalize(c), fixtures::shared_factor()) <
          1e-10);
    CHECK(diag.ell_bar >= 1);
    for (std::size_t i = 1; i < diag.ranks.size(); ++i)
        CHECK(diag.ranks[i] >= diag.ranks[i - 1]);
}

TEST_CASE("elimination method on scalar polynomials", "[subspace]") {
    // a = (z+1)(z-1), b = (z+1)(z-2): common factor z+1.
    Eigen::MatrixXd one = Eigen::MatrixXd::Ones(1, 1);
    const MatPoly a({-one, 0.0 * one, one});
    const MatPoly b({-2.0 * one, -one, one});
    const MatPoly c = agcd::exact_gcd_echelon(PolyPair(a, b));
    const MatPoly cm = agcd::monic_normalize(c);
    REQUIRE(cm.degree() == 1);
    CHECK(cm.coeff(0)(0, 0) == Catch::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("elimination method reports coprime inputs as constant", "[subspace]") {
    const PolyPair pair = fixtures::coprime_pair_2x2();
    const MatPoly c = agcd::exact_gcd_echelon(pair);
    CHECK(c.trimmed().degree() == 0);
}

TEST_CASE("elimination method on noisy data either resolves or reports", "[subspace]") {
    const PolyPair exact = fixtures::shared_factor_pair();
    const PolyPair noisy(agcd::add_noise(exact.a, 0.1, 1), agcd::add_noise(exact.b, 0.1, 2));
    try {
        const MatPoly c = agcd::exact_gcd_echelon(noisy);
        CHECK(c.rows() == 2);  // if it resolves, shapes are coherent
    } catch (const agcd::RankToleranceError&) {
        SUCCEED("ambiguous pivot surfaced");
    } catch (const agcd::ConvergenceError&) {
        SUCCEED("missing rank step surfaced");
    }
}
