#pragma once
// Frozen reference data used across the suite. Matrices are written out
// entry by entry on purpose; tests must not derive them from the code paths
// they are checking.

#include <Eigen/Dense>

#include <vector>

#include "agcd/matpoly.hpp"

namespace fixtures {

inline Eigen::MatrixXd mat2(double a, double b, double c, double d) {
    Eigen::MatrixXd m(2, 2);
    m << a, b, c, d;
    return m;
}

// Pair one: A = [[z-1, 0], [1, z-1]], B = [[z, 1], [0, z-2]]. Coprime, with
// one shared-eigenvalue-free structure; its window-2 resultant is singular
// with a known kernel while window 3 has full column rank.
inline agcd::PolyPair coprime_pair_2x2() {
    agcd::MatPoly a({mat2(-1, 0, 1, -1), Eigen::MatrixXd::Identity(2, 2)});
    agcd::MatPoly b({mat2(0, 1, 0, -2), Eigen::MatrixXd::Identity(2, 2)});
    return agcd::PolyPair(std::move(a), std::move(b));
}

// Expected window-2 resultant of pair one and a kernel direction of it.
inline Eigen::MatrixXd coprime_resultant_w2() {
    Eigen::MatrixXd s(4, 4);
    s << 1, 0, -1, 0,
         0, 1, 1, -1,
         1, 0, 0, 1,
         0, 1, 0, -2;
    return s;
}

inline Eigen::VectorXd coprime_resultant_w2_kernel() {
    Eigen::VectorXd v(4);
    v << 1, -2, 1, -1;
    return v;
}

inline Eigen::MatrixXd coprime_resultant_w3() {
    Eigen::MatrixXd s(8, 6);
    s << 1, 0, -1, 0, 0, 0,
         0, 1, 1, -1, 0, 0,
         0, 0, 1, 0, -1, 0,
         0, 0, 0, 1, 1, -1,
         1, 0, 0, 1, 0, 0,
         0, 1, 0, -2, 0, 0,
         0, 0, 1, 0, 0, 1,
         0, 0, 0, 1, 0, -2;
    return s;
}

// Pair two: degree-2 2x2 pair sharing the monic degree-1 factor
// C = [[z+1, -1], [1, z+1]] on the right, with known cofactors.
inline agcd::MatPoly shared_factor() {
    return agcd::MatPoly({mat2(1, -1, 1, 1), Eigen::MatrixXd::Identity(2, 2)});
}

inline agcd::MatPoly shared_a_cofactor() {
    return agcd::MatPoly({mat2(1, 0, 3, -1), mat2(1, -1, -1, 0)});
}

inline agcd::MatPoly shared_b_cofactor() {
    return agcd::MatPoly({mat2(1, -1, -1, 0), mat2(0, -1, 3, -1)});
}

inline agcd::PolyPair shared_factor_pair() {
    agcd::MatPoly a({mat2(1, -1, 2, -4), mat2(1, -2, 2, 0), mat2(1, -1, -1, 0)});
    agcd::MatPoly b({mat2(0, -2, -1, 1), mat2(0, -2, 1, -4), mat2(0, -1, 3, -1)});
    return agcd::PolyPair(std::move(a), std::move(b));
}

}  // namespace fixtures
