#pragma once
// Subspace extraction of (approximate) common factors: null-space vectors of
// the resultant window are reshaped into block Hankel matrices whose stacked
// left null space carries the factor coefficients. Also: cofactor recovery by
// least squares and an exact echelon-based extractor for noise-free input.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>
#include <vector>

#include "agcd/errors.hpp"
#include "agcd/log.hpp"
#include "agcd/matpoly.hpp"
#include "agcd/numkernel.hpp"
#include "agcd/sylvester.hpp"

namespace agcd {

struct SubspaceDiagnostics {
    // q smallest singular values of the stacked Hankel matrix, ascending.
    Eigen::VectorXd k_matrix_singulars;
    // Ratio of the (qd+1)-th to the qd-th smallest singular value of the
    // resultant; large means the candidate null space is well separated.
    double nullspace_gap = 0.0;
    // ||toeplitz_of(c, ell) * V0||_F for the returned monic factor.
    double residual = 0.0;
    // Distance dist(pair, (abar*c, bbar*c)) from cofactor recovery.
    double cofactor_distance = 0.0;
};

// Least-squares cofactors for a given square factor c of degree d < n:
// minimizes || [A_n ... A_0] - Abar_stack * toeplitz_of(c, n+1) ||_F over the
// stacked cofactor coefficients (same for b), then reports the distance
// between pair and the reassembled products.
inline std::pair<FactorizationTriple, double> recover_cofactors(const PolyPair& pair,
                                                                const MatPoly& c) {
    const PolyPair p = padded_to_common_degree(pair);
    const int n = p.max_degree();
    const int q = p.common_cols();
    const int d = c.degree();
    if (!c.is_square() || c.rows() != q)
        throw DimensionError("recover_cofactors: factor shape does not match the pair");
    if (d >= n && n > 0)
        throw ParameterError("recover_cofactors: factor degree must be below the pair degree");
    if (n == 0 && d > 0)
        throw ParameterError("recover_cofactors: factor degree exceeds a constant pair");

    const Eigen::MatrixXd t = toeplitz_of(c, n + 1);
    auto solve_cofactor = [&](const MatPoly& poly) {
        const int rows = poly.rows();
        Eigen::MatrixXd stack(rows, static_cast<Eigen::Index>(q) * (n + 1));
        for (int j = 0; j <= n; ++j)
            stack.middleCols(static_cast<Eigen::Index>(n - j) * q, q) = poly.coeff(j);
        // Solve stack ~= X * t for X by transposing into column form.
        const Eigen::MatrixXd x = least_squares(t.transpose(), stack.transpose()).transpose();
        std::vector<Eigen::MatrixXd> coeffs(static_cast<std::size_t>(n - d) + 1);
        for (int j = 0; j <= n - d; ++j)
            coeffs[static_cast<std::size_t>(j)] =
                x.middleCols(static_cast<Eigen::Index>(n - d - j) * q, q);
        return MatPoly(std::move(coeffs));
    };

    FactorizationTriple triple{c, solve_cofactor(p.a), solve_cofactor(p.b), d};
    const PolyPair rebuilt(mul(triple.abar, triple.c), mul(triple.bbar, triple.c));
    const double distance = dist(pair, rebuilt);
    return {std::move(triple), distance};
}

// Null-space subspace method. Takes the qd right singular vectors of smallest
// singular value of the resultant window, stacks their block Hankel reshapes,
// and reads the factor coefficients from the q smallest left singular vectors
// of the stack (leading block first). The factor is made monic and cofactors
// are recovered by least squares. ell = 0 selects the default window n(q+1).
inline std::pair<FactorizationTriple, SubspaceDiagnostics> subspace_gcd(const PolyPair& pair,
                                                                        int d, int ell = 0) {
    const PolyPair p = padded_to_common_degree(pair);
    const int n = p.max_degree();
    const int q = p.common_cols();
    if (d < 1) throw ParameterError("subspace_gcd: factor degree must be positive");
    if (d >= n) throw ParameterError("subspace_gcd: factor degree must be below the pair degree");
    if (ell == 0) ell = default_window(p);
    const int kernel_dim = q * d;

    const SylvesterMatrix s = build_resultant(p, ell);
    const SvdResult sv = svd(s.dense());
    const int pc = static_cast<int>(sv.sigmas.size());
    if (kernel_dim >= pc)
        throw ParameterError("subspace_gcd: window too small for the requested factor degree");

    auto sigma_asc = [&](int i) { return sv.sigmas(pc - i); };  // 1-based from smallest
    SubspaceDiagnostics diag;
    diag.nullspace_gap = sigma_asc(kernel_dim) > 0.0
                             ? sigma_asc(kernel_dim + 1) / sigma_asc(kernel_dim)
                             : std::numeric_limits<double>::infinity();

    Eigen::MatrixXd v0(s.dense().cols(), kernel_dim);
    for (int i = 0; i < kernel_dim; ++i) v0.col(i) = sv.v.col(pc - 1 - i);

    Eigen::MatrixXd k_matrix(static_cast<Eigen::Index>(q) * (d + 1),
                             static_cast<Eigen::Index>(kernel_dim) * (ell - d));
    for (int i = 0; i < kernel_dim; ++i)
        k_matrix.middleCols(static_cast<Eigen::Index>(i) * (ell - d), ell - d) =
            block_hankel(v0.col(i), q, d);

    const SvdResult ksv = svd(k_matrix);
    const int kp = static_cast<int>(ksv.sigmas.size());
    diag.k_matrix_singulars = ksv.sigmas.segment(kp - q, q).reverse();

    Eigen::MatrixXd c_stack(q, static_cast<Eigen::Index>(q) * (d + 1));
    for (int r = 0; r < q; ++r) c_stack.row(r) = ksv.u.col(kp - 1 - r).transpose();
    std::vector<Eigen::MatrixXd> c_coeffs(static_cast<std::size_t>(d) + 1);
    for (int j = 0; j <= d; ++j)
        c_coeffs[static_cast<std::size_t>(j)] =
            c_stack.middleCols(static_cast<Eigen::Index>(d - j) * q, q);
    const MatPoly c = monic_normalize(MatPoly(std::move(c_coeffs)));

    diag.residual = (toeplitz_of(c, ell) * v0).norm();
    auto [triple, distance] = recover_cofactors(pair, c);
    diag.cofactor_distance = distance;
    return {std::move(triple), std::move(diag)};
}

struct EchelonOptions {
    int ell_max = 0;               // 0: auto, degree * (cols + 1) + 2
    double pivot_rel_tol = 1e-10;  // threshold = pivot_rel_tol * largest row norm
    double ambiguity_band = 10.0;  // pivots within [T/band, T*band] are ambiguous
};

struct EchelonDiagnostics {
    int ell_bar = 0;
    std::vector<int> ranks;  // rank of the window at each tried size
};

namespace detail {

struct EchelonForm {
    int rank = 0;
    Eigen::MatrixXd sorted_rows;  // pivot rows stacked in pivot-column order
};

// Gaussian elimination without row exchanges: for each column pick the unused
// row with the largest entry, eliminate that column from the other unused
// rows, and zero the eliminated positions exactly. Rows are only reordered at
// the very end when the pivot rows are stacked by pivot column.
inline EchelonForm echelon_reduce(Eigen::MatrixXd m, double pivot_rel_tol,
                                  double ambiguity_band) {
    const Eigen::Index rows = m.rows(), cols = m.cols();
    double max_row_norm = 0.0;
    for (Eigen::Index r = 0; r < rows; ++r)
        max_row_norm = std::max(max_row_norm, m.row(r).norm());
    const double threshold = pivot_rel_tol * max_row_norm;

    std::vector<bool> used(static_cast<std::size_t>(rows), false);
    std::vector<std::pair<Eigen::Index, Eigen::Index>> pivots;  // (column, row)
    for (Eigen::Index col = 0; col < cols; ++col) {
        Eigen::Index best_row = -1;
        double best = 0.0;
        for (Eigen::Index r = 0; r < rows; ++r) {
            if (used[static_cast<std::size_t>(r)]) continue;
            const double v = std::abs(m(r, col));
            if (v > best) {
                best = v;
                best_row = r;
            }
        }
        if (best_row < 0) continue;
        if (best >= threshold / ambiguity_band && best <= threshold * ambiguity_band)
            throw RankToleranceError(
                "echelon_reduce: pivot magnitude within an order of magnitude of the rank "
                "threshold; rank decision is ambiguous");
        if (best <= threshold) continue;
        used[static_cast<std::size_t>(best_row)] = true;
        pivots.emplace_back(col, best_row);
        for (Eigen::Index r = 0; r < rows; ++r) {
            if (used[static_cast<std::size_t>(r)] || std::abs(m(r, col)) == 0.0) continue;
            const double factor = m(r, col) / m(best_row, col);
            m.row(r) -= factor * m.row(best_row);
            m(r, col) = 0.0;
        }
    }

    std::sort(pivots.begin(), pivots.end());
    EchelonForm out;
    out.rank = static_cast<int>(pivots.size());
    out.sorted_rows.resize(out.rank, cols);
    for (std::size_t i = 0; i < pivots.size(); ++i)
        out.sorted_rows.row(static_cast<Eigen::Index>(i)) = m.row(pivots[i].second);
    return out;
}

}  // namespace detail

// Exact common-factor extraction for (near-)exactly factorable pairs: grows
// the window until the rank increment between consecutive windows equals the
// common column count, then reads the factor from the last q nonzero rows of
// the echelon form. The result is raw (not normalized); a singular leading
// block, excess degree, or a constant result signal the known failure modes
// on data that is not exactly factorable.
inline MatPoly exact_gcd_echelon(const PolyPair& pair, const EchelonOptions& opts = {},
                                 EchelonDiagnostics* diag = nullptr) {
    const PolyPair p = padded_to_common_degree(pair);
    const int w = p.max_degree();
    const int q = p.common_cols();
    if (w < 1) throw ParameterError("exact_gcd_echelon: pair must have positive degree");
    const int ell_max = opts.ell_max > 0 ? opts.ell_max : w * (q + 1) + 2;

    int prev_rank = -1;
    detail::EchelonForm prev_form;
    if (diag != nullptr) *diag = {};
    for (int ell = 1; ell <= ell_max; ++ell) {
        const SylvesterMatrix s = build_resultant(p, w + ell);
        detail::EchelonForm form =
            detail::echelon_reduce(s.dense(), opts.pivot_rel_tol, opts.ambiguity_band);
        if (diag != nullptr) diag->ranks.push_back(form.rank);
        if (prev_rank >= 0 && form.rank - prev_rank == q) {
            const int ell_bar = ell - 1;
            if (diag != nullptr) diag->ell_bar = ell_bar;
            if (prev_form.rank < q)
                throw ConvergenceError("exact_gcd_echelon: degenerate window, rank below the "
                                       "common column count");
            const int total_cols = w + ell_bar;
            const Eigen::MatrixXd last =
                prev_form.sorted_rows.bottomRows(q);
            // Row norms of the original matrix bound the meaningful magnitude.
            double scale = last.cwiseAbs().maxCoeff();
            int lead_block = -1;
            for (int t = 0; t < total_cols && lead_block < 0; ++t)
                if (last.middleCols(static_cast<Eigen::Index>(t) * q, q).cwiseAbs().maxCoeff() >
                    opts.pivot_rel_tol * scale)
                    lead_block = t;
            if (lead_block < 0)
                throw ConvergenceError("exact_gcd_echelon: extracted rows are numerically zero");
            const int deg = total_cols - 1 - lead_block;
            std::vector<Eigen::MatrixXd> coeffs(static_cast<std::size_t>(deg) + 1);
            for (int j = 0; j <= deg; ++j)
                coeffs[static_cast<std::size_t>(j)] =
                    last.middleCols(static_cast<Eigen::Index>(total_cols - 1 - j) * q, q);
            MatPoly c(std::move(coeffs));
            if (c.degree() == 0)
                log_info("exact_gcd_echelon: constant factor (inputs are coprime at this "
                         "tolerance)");
            return c;
        }
        prev_rank = form.rank;
        prev_form = std::move(form);
    }
    throw ConvergenceError("exact_gcd_echelon: rank increment criterion not met before the "
                           "window limit");
}

}  // namespace agcd
