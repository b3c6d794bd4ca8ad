#pragma once
// Controllability of i/o systems P(s) y = Q(s) u through primeness of the
// pair: the behavior is controllable iff (P, Q) is left prime, iff the
// transposed pair (P^T, Q^T) has no right common factor. The distance to
// uncontrollability is the smallest coefficient perturbation that gives the
// transposed pair a common factor of degree 1.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>
#include <vector>

#include "agcd/errors.hpp"
#include "agcd/matpoly.hpp"
#include "agcd/numkernel.hpp"
#include "agcd/odegcd.hpp"
#include "agcd/sylvester.hpp"

namespace agcd {

// P square and monic, Q with matching row count and deg(Q) <= deg(P).
// require_monic is relaxed only for solver witnesses, whose perturbation may
// touch P's leading coefficient.
struct IoSystem {
    MatPoly p_poly;
    MatPoly q_poly;

    IoSystem() : p_poly(MatPoly::identity(1)), q_poly(MatPoly::zero(1, 1, 0)) {}

    IoSystem(MatPoly p, MatPoly q, bool require_monic = true)
        : p_poly(std::move(p)), q_poly(std::move(q)) {
        if (!p_poly.is_square()) throw DimensionError("IoSystem: p_poly must be square");
        if (q_poly.rows() != p_poly.rows())
            throw DimensionError("IoSystem: q_poly row count must match p_poly");
        if (q_poly.trimmed().degree() > p_poly.degree())
            throw ParameterError("IoSystem: q_poly degree exceeds p_poly degree");
        if (require_monic && !p_poly.coeff(p_poly.degree()).isIdentity(1e-9))
            throw ParameterError("IoSystem: p_poly must be monic");
    }

    int outputs() const { return p_poly.rows(); }
    int inputs() const { return q_poly.cols(); }
    int degree() const { return p_poly.degree(); }

    // Right-orientation pair used by every resultant computation here.
    PolyPair transposed_pair() const {
        return PolyPair(transpose(p_poly), transpose(q_poly.padded_to(p_poly.degree())));
    }
};

struct ControllabilityReport {
    bool controllable = false;
    double margin = 0.0;  // sigma_min / sigma_max of the resultant
    double sigma_min = 0.0;
    double sigma_max = 0.0;
    int ell = 0;

    explicit operator bool() const { return controllable; }
};

// Rank margin of the pair's resultant; does not assume monic P, so it can
// judge solver witnesses as well as proper systems.
inline ControllabilityReport controllability_margin(const MatPoly& p, const MatPoly& q,
                                                    double rank_tol = 1e-8) {
    if (!(rank_tol > 0.0)) throw ParameterError("controllability_margin: rank_tol must be positive");
    if (!p.is_square()) throw DimensionError("controllability_margin: p must be square");
    if (q.rows() != p.rows())
        throw DimensionError("controllability_margin: q row count must match p");
    PolyPair pair(transpose(p), transpose(q.padded_to(std::max(p.degree(), q.degree()))));
    pair = padded_to_common_degree(pair);
    ControllabilityReport rep;
    rep.ell = pair.max_degree() >= 1 ? default_window(pair) : 1;
    const SvdResult sv = svd(build_resultant(pair, rep.ell).dense());
    rep.sigma_max = sv.sigmas(0);
    rep.sigma_min = sv.sigmas(sv.sigmas.size() - 1);
    rep.margin = rep.sigma_max > 0.0 ? rep.sigma_min / rep.sigma_max : 0.0;
    rep.controllable = rep.sigma_min > rank_tol * rep.sigma_max;
    return rep;
}

inline ControllabilityReport is_controllable(const IoSystem& sys, double rank_tol = 1e-8) {
    return controllability_margin(sys.p_poly, sys.q_poly, rank_tol);
}

struct UncontrollabilityResult {
    double distance = 0.0;        // coefficient-metric distance to the witness
    IoSystem witness;             // perturbed system; leading coefficient may drift from I
    double monic_distance = 0.0;  // distance after re-normalizing the witness to monic P
    bool converged = false;
    GcdResult gcd;
    OdeTrace trace;
};

// Smallest perturbation of (P, Q) that destroys controllability, computed as
// a degree-1 approximate common factor of the transposed pair. The witness is
// returned as found; its monic re-normalization costs extra distance, which
// is reported separately (NaN when the witness leading coefficient is
// singular). Non-convergence is reported through the flag with the best
// witness found.
inline UncontrollabilityResult distance_to_uncontrollability(const IoSystem& sys,
                                                             const OdeParams& params = {}) {
    if (sys.degree() < 1)
        throw ParameterError("distance_to_uncontrollability: constant P admits no degree-1 factor");
    const PolyPair pair = sys.transposed_pair();
    auto [g, trace] = agcd_ode(pair, 1, params);

    UncontrollabilityResult out;
    out.distance = g.coeff_distance;
    out.converged = g.converged;
    out.witness = IoSystem(transpose(g.a_hat), transpose(g.b_hat), false);

    const MatPoly& phat = out.witness.p_poly;
    const Eigen::MatrixXd& lead = phat.coeff(phat.degree());
    Eigen::JacobiSVD<Eigen::MatrixXd> lead_svd(lead,
                                               Eigen::ComputeFullU | Eigen::ComputeFullV);
    const double smax = lead_svd.singularValues()(0);
    const double smin = lead_svd.singularValues()(phat.rows() - 1);
    if (!(smax > 0.0) || smin < 1e-12 * smax) {
        out.monic_distance = std::numeric_limits<double>::quiet_NaN();
    } else {
        const Eigen::MatrixXd inv = lead_svd.matrixV() *
                                    lead_svd.singularValues().cwiseInverse().asDiagonal() *
                                    lead_svd.matrixU().transpose();
        std::vector<Eigen::MatrixXd> pm, qm;
        for (int j = 0; j < phat.degree(); ++j) pm.push_back(inv * phat.coeff(j));
        pm.push_back(Eigen::MatrixXd::Identity(phat.rows(), phat.rows()));
        for (int j = 0; j <= out.witness.q_poly.degree(); ++j)
            qm.push_back(inv * out.witness.q_poly.coeff(j));
        const IoSystem monic(MatPoly(std::move(pm)), MatPoly(std::move(qm)));
        out.monic_distance = dist(sys.transposed_pair(), monic.transposed_pair());
    }
    out.gcd = std::move(g);
    out.trace = std::move(trace);
    return out;
}

}  // namespace agcd
