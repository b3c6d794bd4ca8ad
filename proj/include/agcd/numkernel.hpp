#pragma once
// Dense linear-algebra kernel: full SVD with a deterministic sign convention,
// smallest singular triplets, and minimum-norm least squares. Everything the
// rest of the library needs from a backend passes through here.

#include <Eigen/Dense>

#include <algorithm>
#include <vector>

#include "agcd/errors.hpp"

namespace agcd {

struct SvdResult {
    Eigen::MatrixXd u;       // full left singular vectors, orthonormal columns
    Eigen::VectorXd sigmas;  // nonincreasing, length min(rows, cols)
    Eigen::MatrixXd v;       // full right singular vectors
};

namespace detail {

// Sign convention: each paired singular vector column is flipped so that the
// entry of largest magnitude in u_i is positive; v_i flips with it, keeping
// u_i sigma_i v_i^T invariant. Unpaired trailing columns (full U/V beyond the
// rank bound) get the same rule applied to themselves for determinism.
inline void normalize_svd_signs(Eigen::MatrixXd& u, Eigen::MatrixXd& v) {
    const Eigen::Index paired = std::min(u.cols(), v.cols());
    auto dominant_sign = [](const Eigen::VectorXd& col) {
        Eigen::Index at = 0;
        col.cwiseAbs().maxCoeff(&at);
        return col(at) < 0.0 ? -1.0 : 1.0;
    };
    for (Eigen::Index i = 0; i < paired; ++i) {
        const double s = dominant_sign(u.col(i));
        if (s < 0.0) {
            u.col(i) = -u.col(i);
            v.col(i) = -v.col(i);
        }
    }
    for (Eigen::Index i = paired; i < u.cols(); ++i)
        if (dominant_sign(u.col(i)) < 0.0) u.col(i) = -u.col(i);
    for (Eigen::Index i = paired; i < v.cols(); ++i)
        if (dominant_sign(v.col(i)) < 0.0) v.col(i) = -v.col(i);
}

}  // namespace detail

// Full SVD. Jacobi for small problems (better relative accuracy), divide and
// conquer above that. Non-finite input throws NumericError.
inline SvdResult svd(const Eigen::MatrixXd& m) {
    if (!m.allFinite()) throw NumericError("svd: input has non-finite entries");
    SvdResult out;
    if (std::min(m.rows(), m.cols()) <= 64) {
        Eigen::JacobiSVD<Eigen::MatrixXd> solver(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
        out.u = solver.matrixU();
        out.sigmas = solver.singularValues();
        out.v = solver.matrixV();
    } else {
        Eigen::BDCSVD<Eigen::MatrixXd> solver(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
        out.u = solver.matrixU();
        out.sigmas = solver.singularValues();
        out.v = solver.matrixV();
    }
    detail::normalize_svd_signs(out.u, out.v);
    return out;
}

struct SingularTriplet {
    double sigma = 0.0;
    Eigen::VectorXd u, v;
};

// The k smallest singular triplets in ascending sigma order (triplet 0 is the
// smallest). Requires 1 <= k <= min(rows, cols).
inline std::vector<SingularTriplet> smallest_triplets(const Eigen::MatrixXd& m, int k) {
    const int p = static_cast<int>(std::min(m.rows(), m.cols()));
    if (k < 1 || k > p)
        throw ParameterError("smallest_triplets: k out of range");
    const SvdResult full = svd(m);
    std::vector<SingularTriplet> out;
    out.reserve(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) {
        const int idx = p - 1 - i;
        out.push_back({full.sigmas(idx), full.u.col(idx), full.v.col(idx)});
    }
    return out;
}

// Minimum-norm least-squares solution of m x ~= rhs (complete orthogonal
// decomposition; consistent, over- and under-determined systems alike).
inline Eigen::MatrixXd least_squares(const Eigen::MatrixXd& m, const Eigen::MatrixXd& rhs) {
    if (m.rows() != rhs.rows())
        throw DimensionError("least_squares: row counts differ");
    if (!m.allFinite() || !rhs.allFinite())
        throw NumericError("least_squares: input has non-finite entries");
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(m);
    return cod.solve(rhs);
}

}  // namespace agcd
