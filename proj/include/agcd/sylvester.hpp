#pragma once
// Banded block-resultant matrices for matrix-polynomial pairs, the projection
// onto their structure set, and the block Toeplitz / Hankel companions used by
// the subspace extraction. The structured set is parametrized by coefficient
// blocks; dense views are derived, so structure holds exactly by construction.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "agcd/errors.hpp"
#include "agcd/matpoly.hpp"

namespace agcd {

// Shape bookkeeping for a resultant window of size ell built from an
// (m_a + m_b)-row pair of degree n with q common columns.
struct SylvesterLayout {
    int m_a = 0, m_b = 0, q = 0, n = 0, ell = 0;

    // Number of shifted copies of each polynomial (block rows per half).
    int band() const { return ell - n; }
    int rows() const { return (m_a + m_b) * band(); }
    int cols() const { return q * ell; }

    void validate() const {
        if (m_a < 1 || m_b < 1 || q < 1 || n < 0)
            throw DimensionError("SylvesterLayout: invalid block shape");
        if (ell < n + 1)
            throw ParameterError("SylvesterLayout: window must exceed the degree");
    }

    bool operator==(const SylvesterLayout&) const = default;
};

namespace detail {

// Places [X_n ... X_0] (leading first) into each shifted block row of dst.
inline void fill_band(Eigen::MatrixXd& dst, const std::vector<Eigen::MatrixXd>& coeffs,
                      int row0, int block_rows, int band, int q, int n) {
    for (int i = 0; i < band; ++i)
        for (int t = 0; t <= n; ++t)
            dst.block(row0 + i * block_rows, (i + t) * q, block_rows, q) =
                coeffs[static_cast<std::size_t>(n - t)];
}

inline Eigen::MatrixXd dense_of_blocks(const SylvesterLayout& lo,
                                       const std::vector<Eigen::MatrixXd>& a_blocks,
                                       const std::vector<Eigen::MatrixXd>& b_blocks) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(lo.rows(), lo.cols());
    fill_band(m, a_blocks, 0, lo.m_a, lo.band(), lo.q, lo.n);
    fill_band(m, b_blocks, lo.m_a * lo.band(), lo.m_b, lo.band(), lo.q, lo.n);
    return m;
}

}  // namespace detail

// A matrix of resultant structure, held as its generating coefficient blocks
// (degree ascending, like MatPoly) with the dense matrix materialized once at
// construction. Linear combinations stay inside the structure set.
class SylvesterMatrix {
public:
    SylvesterMatrix(SylvesterLayout layout, std::vector<Eigen::MatrixXd> a_blocks,
                    std::vector<Eigen::MatrixXd> b_blocks)
        : layout_(layout), a_blocks_(std::move(a_blocks)), b_blocks_(std::move(b_blocks)) {
        layout_.validate();
        check_blocks(a_blocks_, layout_.m_a);
        check_blocks(b_blocks_, layout_.m_b);
        dense_ = detail::dense_of_blocks(layout_, a_blocks_, b_blocks_);
    }

    const SylvesterLayout& layout() const { return layout_; }
    const Eigen::MatrixXd& dense() const { return dense_; }
    const std::vector<Eigen::MatrixXd>& a_blocks() const { return a_blocks_; }
    const std::vector<Eigen::MatrixXd>& b_blocks() const { return b_blocks_; }

    // Frobenius norm of the dense matrix; each coefficient block repeats once
    // per shifted copy, hence the band factor.
    double norm() const {
        return std::sqrt(static_cast<double>(layout_.band()) * blocks_squared_norm());
    }

    double blocks_squared_norm() const {
        double s = 0.0;
        for (const auto& blk : a_blocks_) s += blk.squaredNorm();
        for (const auto& blk : b_blocks_) s += blk.squaredNorm();
        return s;
    }

    SylvesterMatrix scaled(double alpha) const {
        return map_blocks(*this, [alpha](const Eigen::MatrixXd& x) { return (alpha * x).eval(); });
    }

    SylvesterMatrix normalized() const {
        const double nrm = norm();
        if (!(nrm > 0.0)) throw NumericError("SylvesterMatrix::normalized: zero matrix");
        return scaled(1.0 / nrm);
    }

private:
    template <typename F>
    static SylvesterMatrix map_blocks(const SylvesterMatrix& x, F&& f) {
        std::vector<Eigen::MatrixXd> a, b;
        a.reserve(x.a_blocks_.size());
        b.reserve(x.b_blocks_.size());
        for (const auto& blk : x.a_blocks_) a.push_back(f(blk));
        for (const auto& blk : x.b_blocks_) b.push_back(f(blk));
        return SylvesterMatrix(x.layout_, std::move(a), std::move(b));
    }

    void check_blocks(const std::vector<Eigen::MatrixXd>& blocks, int block_rows) const {
        if (static_cast<int>(blocks.size()) != layout_.n + 1)
            throw DimensionError("SylvesterMatrix: wrong number of coefficient blocks");
        for (const auto& blk : blocks)
            if (blk.rows() != block_rows || blk.cols() != layout_.q)
                throw DimensionError("SylvesterMatrix: coefficient block shape mismatch");
    }

    SylvesterLayout layout_;
    std::vector<Eigen::MatrixXd> a_blocks_, b_blocks_;
    Eigen::MatrixXd dense_;
};

// Frobenius inner product, computed in block space.
inline double inner(const SylvesterMatrix& x, const SylvesterMatrix& y) {
    if (!(x.layout() == y.layout()))
        throw DimensionError("inner: layouts differ");
    double s = 0.0;
    for (std::size_t j = 0; j < x.a_blocks().size(); ++j)
        s += x.a_blocks()[j].cwiseProduct(y.a_blocks()[j]).sum();
    for (std::size_t j = 0; j < x.b_blocks().size(); ++j)
        s += x.b_blocks()[j].cwiseProduct(y.b_blocks()[j]).sum();
    return static_cast<double>(x.layout().band()) * s;
}

// x + alpha * y.
inline SylvesterMatrix add_scaled(const SylvesterMatrix& x, double alpha,
                                  const SylvesterMatrix& y) {
    if (!(x.layout() == y.layout()))
        throw DimensionError("add_scaled: layouts differ");
    std::vector<Eigen::MatrixXd> a, b;
    a.reserve(x.a_blocks().size());
    b.reserve(x.b_blocks().size());
    for (std::size_t j = 0; j < x.a_blocks().size(); ++j)
        a.push_back(x.a_blocks()[j] + alpha * y.a_blocks()[j]);
    for (std::size_t j = 0; j < x.b_blocks().size(); ++j)
        b.push_back(x.b_blocks()[j] + alpha * y.b_blocks()[j]);
    return SylvesterMatrix(x.layout(), std::move(a), std::move(b));
}

// Default analysis window: with q common columns and degree n, corank equals
// the total common-divisor multiplicity once ell >= n(q+1).
inline int default_window(const PolyPair& pair) {
    return pair.max_degree() * (pair.common_cols() + 1);
}

// Builds the resultant window of size ell for the pair (members zero-padded to
// the common degree first). Shifted copies of [A_n ... A_0] fill the top half,
// copies of [B_n ... B_0] the bottom half.
inline SylvesterMatrix build_resultant(const PolyPair& pair, int ell) {
    const PolyPair p = padded_to_common_degree(pair);
    if (!p.a.all_finite() || !p.b.all_finite())
        throw NumericError("build_resultant: non-finite coefficients");
    SylvesterLayout lo{p.a.rows(), p.b.rows(), p.common_cols(), p.max_degree(), ell};
    lo.validate();
    return SylvesterMatrix(lo, p.a.coeffs(), p.b.coeffs());
}

// Orthogonal projection of a dense matrix onto the structure set: blocks on
// each structural diagonal are averaged. The mean is anchored at the first
// block (x0 + mean(xj - x0)), which is exact when all blocks agree, so
// projecting an already-structured matrix is a bit-level no-op.
inline SylvesterMatrix project_structure(const Eigen::MatrixXd& h, const SylvesterLayout& lo) {
    lo.validate();
    if (h.rows() != lo.rows() || h.cols() != lo.cols())
        throw DimensionError("project_structure: shape does not match layout");
    const int band = lo.band();
    auto average_half = [&](int row0, int block_rows) {
        std::vector<Eigen::MatrixXd> coeffs(static_cast<std::size_t>(lo.n) + 1);
        for (int t = 0; t <= lo.n; ++t) {
            const Eigen::MatrixXd first = h.block(row0, t * lo.q, block_rows, lo.q);
            Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(block_rows, lo.q);
            for (int i = 1; i < band; ++i)
                acc += h.block(row0 + i * block_rows, (i + t) * lo.q, block_rows, lo.q) - first;
            coeffs[static_cast<std::size_t>(lo.n - t)] = first + acc / static_cast<double>(band);
        }
        return coeffs;
    };
    return SylvesterMatrix(lo, average_half(0, lo.m_a), average_half(lo.m_a * band, lo.m_b));
}

// Reads the generating pair back out of a structured matrix.
inline PolyPair read_coefficients(const SylvesterMatrix& s) {
    return PolyPair(MatPoly(s.a_blocks()), MatPoly(s.b_blocks()));
}

// Dense overload: verifies the input is structured (relative Frobenius
// distance to its projection below tol), then reads blocks from the first
// block row of each half so the result reproduces the input exactly.
inline PolyPair read_coefficients(const Eigen::MatrixXd& h, const SylvesterLayout& lo,
                                  double tol = 1e-10) {
    const SylvesterMatrix proj = project_structure(h, lo);
    const double err = (h - proj.dense()).norm();
    if (err > tol * std::max(1.0, h.norm()))
        throw StructureError("read_coefficients: matrix is not of resultant structure");
    auto first_row_blocks = [&](int row0, int block_rows) {
        std::vector<Eigen::MatrixXd> coeffs(static_cast<std::size_t>(lo.n) + 1);
        for (int t = 0; t <= lo.n; ++t)
            coeffs[static_cast<std::size_t>(lo.n - t)] = h.block(row0, t * lo.q, block_rows, lo.q);
        return coeffs;
    };
    return PolyPair(MatPoly(first_row_blocks(0, lo.m_a)),
                    MatPoly(first_row_blocks(lo.m_a * lo.band(), lo.m_b)));
}

// The pair generating s + eps * e, assembled in block space (exact structure).
inline PolyPair perturbed_pair(const SylvesterMatrix& s, double eps, const SylvesterMatrix& e) {
    return read_coefficients(add_scaled(s, eps, e));
}

// Converts a perturbation size in matrix Frobenius norm into the coefficient
// metric on pairs: every coefficient repeats band times in the matrix.
inline double poly_distance_of(double eps, const SylvesterLayout& lo) {
    if (eps < 0.0) throw ParameterError("poly_distance_of: negative perturbation size");
    return eps / std::sqrt(static_cast<double>(lo.band()));
}

// Block Toeplitz companion of a square polynomial c: block row i carries
// [C_d ... C_0] at block columns i .. i+d. Right multiplication by it performs
// right multiplication by c on windowed coefficient rows.
inline Eigen::MatrixXd toeplitz_of(const MatPoly& c, int block_cols) {
    if (!c.is_square()) throw DimensionError("toeplitz_of: polynomial is not square");
    const int q = c.rows();
    const int d = c.degree();
    if (block_cols < d + 1)
        throw ParameterError("toeplitz_of: too few block columns for the degree");
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(q) * (block_cols - d),
                                              static_cast<Eigen::Index>(q) * block_cols);
    for (int i = 0; i < block_cols - d; ++i)
        for (int t = 0; t <= d; ++t)
            m.block(static_cast<Eigen::Index>(i) * q, static_cast<Eigen::Index>(i + t) * q, q, q) =
                c.coeff(d - t);
    return m;
}

// Block Hankel matrix of a vector v of length block_rows * c, read as a
// (block_rows x c) column-major array: H column j stacks array columns
// j .. j+d. Kernel vectors of a degree-d multiplication operator generate
// rank-deficient Hankels of exactly this shape.
inline Eigen::MatrixXd block_hankel(const Eigen::VectorXd& v, int block_rows, int d) {
    if (block_rows < 1 || v.size() % block_rows != 0)
        throw DimensionError("block_hankel: vector length not divisible by block rows");
    const int c = static_cast<int>(v.size()) / block_rows;
    if (c < d + 1)
        throw DimensionError("block_hankel: vector too short for the window degree");
    const Eigen::Map<const Eigen::MatrixXd> arr(v.data(), block_rows, c);
    Eigen::MatrixXd h(static_cast<Eigen::Index>(block_rows) * (d + 1), c - d);
    for (int j = 0; j < c - d; ++j)
        for (int t = 0; t <= d; ++t)
            h.block(static_cast<Eigen::Index>(t) * block_rows, j, block_rows, 1) = arr.col(j + t);
    return h;
}

}  // namespace agcd
