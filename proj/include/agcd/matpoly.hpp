#pragma once
// Matrix polynomials over the reals: coefficient storage (degree ascending),
// arithmetic, the coefficient metric, and random instance generation.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "agcd/errors.hpp"

namespace agcd {

// A(z) = A_0 + A_1 z + ... + A_n z^n with real rows x cols coefficients.
// Coefficients are stored degree-ascending: coeff(j) multiplies z^j.
// Leading coefficients may be zero (zero-padding is explicit and legal);
// trimmed() drops exactly-zero leading blocks.
class MatPoly {
public:
    MatPoly() : coeffs_{Eigen::MatrixXd::Zero(1, 1)} {}

    explicit MatPoly(std::vector<Eigen::MatrixXd> coeffs) : coeffs_(std::move(coeffs)) {
        if (coeffs_.empty()) throw DimensionError("MatPoly: coefficient list is empty");
        const auto r = coeffs_.front().rows();
        const auto c = coeffs_.front().cols();
        if (r < 1 || c < 1) throw DimensionError("MatPoly: coefficients must be nonempty matrices");
        for (const auto& blk : coeffs_) {
            if (blk.rows() != r || blk.cols() != c)
                throw DimensionError("MatPoly: coefficient shapes differ");
        }
    }

    static MatPoly constant(Eigen::MatrixXd c0) {
        std::vector<Eigen::MatrixXd> v;
        v.push_back(std::move(c0));
        return MatPoly(std::move(v));
    }

    static MatPoly identity(int size) {
        return constant(Eigen::MatrixXd::Identity(size, size));
    }

    static MatPoly zero(int rows, int cols, int degree = 0) {
        if (rows < 1 || cols < 1 || degree < 0)
            throw DimensionError("MatPoly::zero: invalid shape");
        return MatPoly(std::vector<Eigen::MatrixXd>(
            static_cast<std::size_t>(degree) + 1, Eigen::MatrixXd::Zero(rows, cols)));
    }

    int rows() const { return static_cast<int>(coeffs_.front().rows()); }
    int cols() const { return static_cast<int>(coeffs_.front().cols()); }
    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }

    const Eigen::MatrixXd& coeff(int j) const { return coeffs_.at(static_cast<std::size_t>(j)); }
    Eigen::MatrixXd& coeff(int j) { return coeffs_.at(static_cast<std::size_t>(j)); }
    const std::vector<Eigen::MatrixXd>& coeffs() const { return coeffs_; }

    bool is_square() const { return rows() == cols(); }

    bool leading_is_zero() const { return coeffs_.back().isZero(0.0); }

    // Frobenius norm of the stacked coefficients: sqrt(sum_j ||A_j||_F^2).
    double frobenius_norm() const {
        double s = 0.0;
        for (const auto& blk : coeffs_) s += blk.squaredNorm();
        return std::sqrt(s);
    }

    bool all_finite() const {
        for (const auto& blk : coeffs_)
            if (!blk.allFinite()) return false;
        return true;
    }

    // Drops exactly-zero leading coefficients; the constant term always stays.
    MatPoly trimmed() const {
        std::size_t keep = coeffs_.size();
        while (keep > 1 && coeffs_[keep - 1].isZero(0.0)) --keep;
        return MatPoly(std::vector<Eigen::MatrixXd>(coeffs_.begin(),
                                                    coeffs_.begin() + static_cast<long>(keep)));
    }

    // Zero-pads up to the requested degree (no-op if already at least that long).
    MatPoly padded_to(int degree) const {
        if (degree < this->degree()) return *this;
        std::vector<Eigen::MatrixXd> v = coeffs_;
        v.resize(static_cast<std::size_t>(degree) + 1, Eigen::MatrixXd::Zero(rows(), cols()));
        return MatPoly(std::move(v));
    }

private:
    std::vector<Eigen::MatrixXd> coeffs_;
};

// Horner evaluation at a real point.
inline Eigen::MatrixXd evaluate(const MatPoly& p, double z) {
    Eigen::MatrixXd acc = p.coeff(p.degree());
    for (int j = p.degree() - 1; j >= 0; --j) acc = (acc * z + p.coeff(j)).eval();
    return acc;
}

inline MatPoly transpose(const MatPoly& p) {
    std::vector<Eigen::MatrixXd> v;
    v.reserve(p.coeffs().size());
    for (const auto& blk : p.coeffs()) v.push_back(blk.transpose());
    return MatPoly(std::move(v));
}

// Product p(z) q(z); exactly-zero leading blocks of the result are trimmed.
inline MatPoly mul(const MatPoly& p, const MatPoly& q) {
    if (p.cols() != q.rows())
        throw DimensionError("mul: inner dimensions differ");
    const int dp = p.degree(), dq = q.degree();
    std::vector<Eigen::MatrixXd> out(static_cast<std::size_t>(dp + dq) + 1,
                                     Eigen::MatrixXd::Zero(p.rows(), q.cols()));
    for (int i = 0; i <= dp; ++i)
        for (int j = 0; j <= dq; ++j)
            out[static_cast<std::size_t>(i + j)] += p.coeff(i) * q.coeff(j);
    return MatPoly(std::move(out)).trimmed();
}

inline MatPoly add(const MatPoly& p, const MatPoly& q) {
    if (p.rows() != q.rows() || p.cols() != q.cols())
        throw DimensionError("add: shapes differ");
    const int d = std::max(p.degree(), q.degree());
    const MatPoly pp = p.padded_to(d), qq = q.padded_to(d);
    std::vector<Eigen::MatrixXd> out;
    out.reserve(static_cast<std::size_t>(d) + 1);
    for (int j = 0; j <= d; ++j) out.push_back(pp.coeff(j) + qq.coeff(j));
    return MatPoly(std::move(out));
}

// sqrt(sum_j ||P_j - Q_j||_F^2) with the shorter polynomial zero-padded.
inline double coefficient_distance(const MatPoly& p, const MatPoly& q) {
    if (p.rows() != q.rows() || p.cols() != q.cols())
        throw DimensionError("coefficient_distance: shapes differ");
    const int d = std::max(p.degree(), q.degree());
    const MatPoly pp = p.padded_to(d), qq = q.padded_to(d);
    double s = 0.0;
    for (int j = 0; j <= d; ++j) s += (pp.coeff(j) - qq.coeff(j)).squaredNorm();
    return std::sqrt(s);
}

// Left-multiplies every coefficient by the inverse of the leading one, so the
// result has leading coefficient exactly I (the mathematically exact value is
// written rather than the rounded product, which also makes the operation
// idempotent to the bit). Throws NormalizationError carrying the smallest
// singular value when the leading block is singular or nearly so.
inline MatPoly monic_normalize(const MatPoly& c, double rcond_bound = 1e-12) {
    if (!c.is_square()) throw DimensionError("monic_normalize: polynomial is not square");
    const Eigen::MatrixXd& lead = c.coeff(c.degree());
    const int q = c.rows();
    if (lead.isIdentity(0.0)) return c;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(lead, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const double smax = svd.singularValues()(0);
    const double smin = svd.singularValues()(q - 1);
    if (!(smax > 0.0) || smin < rcond_bound * smax)
        throw NormalizationError("monic_normalize: leading coefficient is numerically singular",
                                 smin);
    const Eigen::MatrixXd inv =
        svd.matrixV() * svd.singularValues().cwiseInverse().asDiagonal() * svd.matrixU().transpose();
    std::vector<Eigen::MatrixXd> out;
    out.reserve(c.coeffs().size());
    for (int j = 0; j < c.degree(); ++j) out.push_back(inv * c.coeff(j));
    out.push_back(Eigen::MatrixXd::Identity(q, q));
    return MatPoly(std::move(out));
}

namespace detail {
// splitmix64 step; decorrelates RNG streams derived from nearby seeds.
inline std::uint64_t mix_seed(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline Eigen::MatrixXd random_gaussian(int rows, int cols, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::MatrixXd m(rows, cols);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) m(r, c) = gauss(rng);
    return m;
}
}  // namespace detail

// Adds independent N(0, level^2) noise to every coefficient entry. level == 0
// returns the input bit-for-bit. Entries are drawn coefficient by coefficient
// in row-major order from a single seeded stream, so outputs are reproducible.
inline MatPoly add_noise(const MatPoly& p, double level, std::uint64_t seed) {
    if (level < 0.0) throw ParameterError("add_noise: negative noise level");
    if (level == 0.0) return p;
    std::mt19937_64 rng(detail::mix_seed(seed));
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<Eigen::MatrixXd> out = p.coeffs();
    for (auto& blk : out)
        for (Eigen::Index r = 0; r < blk.rows(); ++r)
            for (Eigen::Index col = 0; col < blk.cols(); ++col)
                blk(r, col) += level * gauss(rng);
    return MatPoly(std::move(out));
}

// A pair sharing a column count, the unit on which common divisors act.
// Right orientation: a common factor C appears as a = abar * C, b = bbar * C.
struct PolyPair {
    MatPoly a, b;

    PolyPair() = default;
    PolyPair(MatPoly a_, MatPoly b_) : a(std::move(a_)), b(std::move(b_)) {
        if (a.cols() != b.cols())
            throw DimensionError("PolyPair: column counts differ");
    }

    int common_cols() const { return a.cols(); }
    int max_degree() const { return std::max(a.degree(), b.degree()); }
};

// Pads both members to their common maximum degree.
inline PolyPair padded_to_common_degree(const PolyPair& p) {
    const int n = p.max_degree();
    return PolyPair(p.a.padded_to(n), p.b.padded_to(n));
}

// Metric on pairs: sqrt of the summed squared coefficient distances.
inline double dist(const PolyPair& x, const PolyPair& y) {
    const double da = coefficient_distance(x.a, y.a);
    const double db = coefficient_distance(x.b, y.b);
    return std::sqrt(da * da + db * db);
}

// A factorization a ~ abar * c, b ~ bbar * c with c monic of degree d.
struct FactorizationTriple {
    MatPoly c, abar, bbar;
    int d = 0;
};

// Draws a random m x m pair of degree n sharing a planted monic common factor
// of degree d: c monic with N(0,1) lower coefficients, cofactors of degree
// n - d with N(0,1) entries. Returns the pair and the planted factorization.
inline std::pair<PolyPair, FactorizationTriple> random_with_common_factor(int m, int n, int d,
                                                                          std::uint64_t seed) {
    if (m < 1) throw ParameterError("random_with_common_factor: m must be positive");
    if (d < 1 || d >= n)
        throw ParameterError("random_with_common_factor: need 0 < d < n");
    std::mt19937_64 rng(detail::mix_seed(seed));
    std::vector<Eigen::MatrixXd> c_coeffs;
    c_coeffs.reserve(static_cast<std::size_t>(d) + 1);
    for (int j = 0; j < d; ++j) c_coeffs.push_back(detail::random_gaussian(m, m, rng));
    c_coeffs.push_back(Eigen::MatrixXd::Identity(m, m));
    MatPoly c(std::move(c_coeffs));

    auto random_poly = [&](int deg) {
        std::vector<Eigen::MatrixXd> v;
        v.reserve(static_cast<std::size_t>(deg) + 1);
        for (int j = 0; j <= deg; ++j) v.push_back(detail::random_gaussian(m, m, rng));
        return MatPoly(std::move(v));
    };
    MatPoly abar = random_poly(n - d);
    MatPoly bbar = random_poly(n - d);

    PolyPair pair(mul(abar, c), mul(bbar, c));
    FactorizationTriple triple{std::move(c), std::move(abar), std::move(bbar), d};
    return {std::move(pair), std::move(triple)};
}

}  // namespace agcd
