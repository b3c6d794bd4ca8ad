#pragma once
// Two-level gradient-flow solver for approximate common factors. Inner level:
// constrained flow E' = -P(uv^T) + <E, P(uv^T)> E on the unit sphere of
// structured perturbations at fixed eps, integrated by accept/reject Euler
// steps, monotonically decreasing the target singular value of S + eps*E.
// Outer level: continuation in eps; between inner phases the free flow
// E' = -P(uv^T) grows ||E|| so the perturbation magnitude can be transported
// to the next eps without losing descent.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "agcd/errors.hpp"
#include "agcd/log.hpp"
#include "agcd/matpoly.hpp"
#include "agcd/numkernel.hpp"
#include "agcd/subspace.hpp"
#include "agcd/sylvester.hpp"

namespace agcd {

struct OdeParams {
    double eps0 = 1e-2;    // initial perturbation magnitude
    double delta = 1e-2;   // initial outer eps increment; halved on overshoot
    double tol = 1e-8;     // zero tolerance for sigma_k, relative to sigma_max(S)
    double h0 = 0.1;       // initial Euler step
    double gamma = 1.2;    // step adaptation factor
    int max_inner = 5000;  // Euler iterations per phase
    int max_outer = 200;   // continuation phases
    int ell = 0;           // resultant window override; 0 selects n(q+1)
    double delta_min = 0;  // smallest outer increment before accepting overshoot; 0: delta/64

    void validate() const {
        if (!(eps0 > 0.0) || !(delta > 0.0) || !(tol > 0.0) || !(h0 > 0.0))
            throw ParameterError("OdeParams: eps0, delta, tol, h0 must be positive");
        if (!(gamma > 1.0)) throw ParameterError("OdeParams: gamma must exceed 1");
        if (max_inner < 1 || max_outer < 1)
            throw ParameterError("OdeParams: iteration caps must be positive");
        if (delta_min < 0.0) throw ParameterError("OdeParams: delta_min must be nonnegative");
    }
};

// Below this step size the Euler integration is considered stalled.
inline constexpr double kStepUnderflow = 1e-14;

enum class OdePhase { Init, Inner, Free };

enum class StopReason {
    None,
    ReachedTolerance,  // sigma_k fell to the zero tolerance
    Plateau,           // last accepted step changed sigma_k by less than tol
    StepUnderflow,     // growth step rejected down to the underflow bound (free phase)
    MaxIterations,
    TargetNorm,        // free phase reached the requested norm
};

struct OdeTraceRow {
    OdePhase phase = OdePhase::Init;
    double eps = 0.0;
    double sigma_k = 0.0;
    double norm_e = 0.0;
    double h = 0.0;
    bool accepted = true;
};

struct OdeTrace {
    std::vector<OdeTraceRow> rows;
};

// State of the flow at fixed perturbation size. sigma_k, u, v always refer to
// the current matrix S + epsilon * E with ||E||_F = 1.
struct InnerState {
    SylvesterMatrix e;
    double epsilon = 0.0;
    int k = 1;               // target index, counted from the smallest (1-based)
    double sigma_k = 0.0;
    Eigen::VectorXd u, v;
    double h = 0.0;
    double sigma_max = 0.0;  // largest singular value of the unperturbed S
    bool coalescence_warning = false;
    StopReason stop = StopReason::None;
};

namespace detail {

struct TargetTriplet {
    double sigma = 0.0;
    Eigen::VectorXd u, v;
    bool coalescent = false;
};

// k-th smallest singular triplet plus a gap check against both neighbors.
inline TargetTriplet target_triplet(const Eigen::MatrixXd& m, int k, double sigma_max) {
    const SvdResult sv = svd(m);
    const int pc = static_cast<int>(sv.sigmas.size());
    if (k < 1 || k > pc) throw ParameterError("target_triplet: singular index out of range");
    const int idx = pc - k;
    TargetTriplet t;
    t.sigma = sv.sigmas(idx);
    t.u = sv.u.col(idx);
    t.v = sv.v.col(idx);
    double gap = std::numeric_limits<double>::infinity();
    if (idx + 1 < pc) gap = std::min(gap, sv.sigmas(idx) - sv.sigmas(idx + 1));
    if (idx > 0) gap = std::min(gap, sv.sigmas(idx - 1) - sv.sigmas(idx));
    t.coalescent = gap < 1e-10 * sigma_max;
    return t;
}

}  // namespace detail

// Derivative of sigma_k along a structured direction: eps * u^T Edot v.
inline double sigma_derivative(const InnerState& st, const SylvesterMatrix& edot) {
    return st.epsilon * st.u.dot(edot.dense() * st.v);
}

// Right-hand side of the constrained flow: -P(uv^T) + <E, P(uv^T)> E. It is
// tangent to the unit sphere (<E, Edot> = 0 in exact arithmetic) and a descent
// direction for sigma_k.
inline SylvesterMatrix gradient_direction(const InnerState& st) {
    const SylvesterMatrix p =
        project_structure(st.u * st.v.transpose(), st.e.layout());
    const double pnorm = p.norm();
    if (!(pnorm > 0.0))
        throw NumericError("gradient_direction: projected gradient vanished at positive sigma");
    return add_scaled(p.scaled(-1.0), inner(st.e, p), st.e);
}

// Steepest-descent initial perturbation at eps -> 0: E = -P(uv^T)/||P(uv^T)||
// computed from the unperturbed matrix, then re-evaluated at eps0.
inline InnerState make_initial_state(const SylvesterMatrix& s, int k, const OdeParams& p) {
    p.validate();
    const SvdResult sv = svd(s.dense());
    const int pc = static_cast<int>(sv.sigmas.size());
    if (k < 1 || k > pc) throw ParameterError("make_initial_state: singular index out of range");
    const double sigma_max = sv.sigmas(0);
    const SylvesterMatrix proj =
        project_structure(sv.u.col(pc - k) * sv.v.col(pc - k).transpose(), s.layout());
    const double pnorm = proj.norm();
    if (!(pnorm > 0.0))
        throw NumericError("make_initial_state: projected gradient vanished; the input already "
                           "attains the factor");
    InnerState st{proj.scaled(-1.0 / pnorm), p.eps0, k, 0.0, {}, {}, p.h0, sigma_max};
    const auto t = detail::target_triplet(s.dense() + st.epsilon * st.e.dense(), k, sigma_max);
    st.sigma_k = t.sigma;
    st.u = t.u;
    st.v = t.v;
    st.coalescence_warning = t.coalescent;
    return st;
}

namespace detail {

// Accepted steps this small, this many times in a row, end the constrained
// phase. A single near-zero decrement is not enough: the flow passes through
// near-stationary regions (the initial direction is one by construction) and
// the step size needs room to regrow before progress shows up again.
inline constexpr int kPlateauPersistence = 30;

// Algorithm core shared by the public entry points. Appends to *trace when
// given. Returns with st.stop set; never throws for stalls.
inline InnerState inner_iteration_core(const SylvesterMatrix& s, InnerState st,
                                       const OdeParams& p, OdeTrace* trace) {
    const double tol_abs = p.tol * st.sigma_max;
    st.stop = StopReason::MaxIterations;
    int flat_steps = 0;
    for (int it = 0; it < p.max_inner; ++it) {
        if (st.sigma_k <= tol_abs) {
            st.stop = StopReason::ReachedTolerance;
            return st;
        }
        const SylvesterMatrix edot = gradient_direction(st);
        bool rejected = false;
        double sigma_prev = st.sigma_k;
        while (true) {
            if (st.h < kStepUnderflow) {
                // No step of any size descends, so the state is stationary at
                // working precision. That is stagnation, not a failure.
                st.stop = StopReason::Plateau;
                return st;
            }
            const SylvesterMatrix cand = add_scaled(st.e, st.h, edot).normalized();
            const auto t = target_triplet(s.dense() + st.epsilon * cand.dense(), st.k,
                                          st.sigma_max);
            const bool accept = t.sigma <= st.sigma_k;
            if (trace != nullptr)
                trace->rows.push_back(
                    {OdePhase::Inner, st.epsilon, t.sigma, 1.0, st.h, accept});
            if (!accept) {
                st.h /= p.gamma;
                rejected = true;
                continue;
            }
            st.e = cand;
            sigma_prev = st.sigma_k;
            st.sigma_k = t.sigma;
            st.u = t.u;
            st.v = t.v;
            st.coalescence_warning = st.coalescence_warning || t.coalescent;
            if (!rejected) st.h *= p.gamma;
            break;
        }
        if (st.sigma_k <= tol_abs) {
            st.stop = StopReason::ReachedTolerance;
            return st;
        }
        flat_steps = std::abs(sigma_prev - st.sigma_k) < tol_abs ? flat_steps + 1 : 0;
        if (flat_steps >= kPlateauPersistence) {
            st.stop = StopReason::Plateau;
            return st;
        }
    }
    return st;
}

// Free flow E' = -P(uv^T) at fixed eps, growing ||E|| until it reaches
// eps_target / eps. On success the growth is committed: eps <- eps * ||E||,
// E renormalized; sigma/u/v carry over since the matrix is unchanged up to a
// single rounding (keeps accepted-sigma monotonicity exact across phases).
inline InnerState free_phase_core(const SylvesterMatrix& s, InnerState st, double eps_target,
                                  const OdeParams& p, OdeTrace* trace) {
    if (eps_target < st.epsilon)
        throw ParameterError("free_gradient_phase: target must not shrink eps");
    st.stop = StopReason::None;
    if (eps_target == st.epsilon) {
        st.stop = StopReason::TargetNorm;
        return st;
    }
    const double tol_abs = p.tol * st.sigma_max;
    const double ratio_target = eps_target / st.epsilon;
    // The constrained phase may have ground its step down to the underflow
    // bound while polishing a stationary point; the free flow lives on a
    // different scale and starts from a fresh step.
    st.h = std::max(st.h, p.h0);
    double norm_e = 1.0;
    for (int it = 0; it < p.max_inner; ++it) {
        if (norm_e >= ratio_target) {
            st.stop = StopReason::TargetNorm;
            break;
        }
        if (st.sigma_k <= tol_abs) {
            st.stop = StopReason::ReachedTolerance;
            break;
        }
        const SylvesterMatrix proj =
            project_structure(st.u * st.v.transpose(), st.e.layout());
        const double pnorm = proj.norm();
        if (!(pnorm > 0.0))
            throw NumericError("free_gradient_phase: projected gradient vanished at positive "
                               "sigma");
        bool rejected = false;
        while (true) {
            // Cap so a single step cannot fly far past the target norm.
            const double h_cap = (1.02 * ratio_target - norm_e) / pnorm;
            const double h_use = h_cap > 0.0 ? std::min(st.h, h_cap) : st.h;
            if (h_use < kStepUnderflow) {
                st.stop = StopReason::StepUnderflow;
                break;
            }
            const SylvesterMatrix cand = add_scaled(st.e, -h_use, proj);
            const double cand_norm = cand.norm();
            const auto t = target_triplet(s.dense() + st.epsilon * cand.dense(), st.k,
                                          st.sigma_max);
            const bool accept = t.sigma <= st.sigma_k;
            if (trace != nullptr)
                trace->rows.push_back(
                    {OdePhase::Free, st.epsilon, t.sigma, cand_norm, h_use, accept});
            if (!accept) {
                st.h = h_use / p.gamma;
                rejected = true;
                continue;
            }
            st.e = cand;
            st.sigma_k = t.sigma;
            st.u = t.u;
            st.v = t.v;
            st.coalescence_warning = st.coalescence_warning || t.coalescent;
            norm_e = cand_norm;
            if (!rejected) st.h *= p.gamma;
            break;
        }
        if (st.stop == StopReason::StepUnderflow) break;
    }
    if (st.stop == StopReason::None || st.stop == StopReason::StepUnderflow)
        throw ConvergenceError("free_gradient_phase: perturbation norm failed to grow to the "
                               "continuation target");
    // Commit the transport. S + eps*E == S + (eps*norm)*(E/norm) exactly, so
    // the singular data is carried instead of recomputed.
    st.epsilon *= norm_e;
    st.e = st.e.scaled(1.0 / norm_e);
    return st;
}

}  // namespace detail

// One constrained phase at fixed eps. Stops on tolerance or stagnation; a
// max_inner exhaustion returns the best state with a warning.
inline std::pair<InnerState, OdeTrace> inner_iteration(const SylvesterMatrix& s,
                                                       const InnerState& state,
                                                       const OdeParams& p) {
    p.validate();
    OdeTrace trace;
    InnerState out = detail::inner_iteration_core(s, state, p, &trace);
    if (out.stop == StopReason::MaxIterations)
        log_info("inner_iteration: iteration cap reached before the stopping test");
    return {std::move(out), std::move(trace)};
}

// Free growth phase toward eps_target (see core above).
inline InnerState free_gradient_phase(const SylvesterMatrix& s, const InnerState& state,
                                      double eps_target, const OdeParams& p,
                                      OdeTrace* trace = nullptr) {
    p.validate();
    return detail::free_phase_core(s, state, eps_target, p, trace);
}

struct GcdResult {
    MatPoly a_hat, b_hat;
    FactorizationTriple triple;
    double epsilon = 0.0;
    double matrix_distance = 0.0;  // perturbation size in matrix Frobenius norm
    double coeff_distance = 0.0;   // same perturbation in the coefficient metric
    bool converged = false;
    double sigma_final = 0.0;
    double sigma_max = 0.0;
    bool extraction_ok = false;
    std::string extraction_warning;
};

namespace detail {

inline void extract_factorization(const PolyPair& hat, int d, int ell, GcdResult& result) {
    try {
        auto [triple, diag] = subspace_gcd(hat, d, ell);
        (void)diag;
        result.triple = std::move(triple);
        result.extraction_ok = true;
    } catch (const std::exception& ex) {
        result.extraction_ok = false;
        result.extraction_warning = ex.what();
        log_info(std::string("factor extraction failed: ") + ex.what());
    }
}

}  // namespace detail

// Full two-level solver. Drives the (q*d)-th smallest singular value of
// S + eps*E to the zero tolerance by alternating free growth and constrained
// descent, then reads the perturbed pair off the structured matrix and
// extracts its factorization. Non-convergence is reported through the
// converged flag with the best iterate, never by discarding work.
inline std::pair<GcdResult, OdeTrace> agcd_ode(const PolyPair& pair, int d,
                                               const OdeParams& params = {}) {
    params.validate();
    const PolyPair p = padded_to_common_degree(pair);
    const int n = p.max_degree();
    const int q = p.common_cols();
    if (d < 1) throw ParameterError("agcd_ode: factor degree must be positive");
    if (d > n) throw ParameterError("agcd_ode: factor degree exceeds the pair degree");
    const int ell = params.ell > 0 ? params.ell : default_window(p);
    const int k = q * d;

    const SylvesterMatrix s = build_resultant(p, ell);
    OdeTrace trace;
    GcdResult result;

    {
        const SvdResult sv0 = svd(s.dense());
        if (k > static_cast<int>(sv0.sigmas.size()))
            throw ParameterError("agcd_ode: window too small for the requested factor degree");
        const double sigma_max = sv0.sigmas(0);
        const double sigma0 = sv0.sigmas(static_cast<int>(sv0.sigmas.size()) - k);
        result.sigma_max = sigma_max;
        const double tol_abs = params.tol * sigma_max;
        trace.rows.push_back({OdePhase::Init, 0.0, sigma0, 0.0, params.h0, true});
        if (sigma0 <= tol_abs) {
            result.a_hat = pair.a;
            result.b_hat = pair.b;
            result.converged = true;
            result.sigma_final = sigma0;
            detail::extract_factorization(p, d, ell, result);
            return {std::move(result), std::move(trace)};
        }
    }

    InnerState st = make_initial_state(s, k, params);
    const double tol_abs = params.tol * st.sigma_max;
    st = detail::inner_iteration_core(s, st, params, &trace);
    log_debug("initial inner phase: eps=" + std::to_string(st.epsilon) +
              " sigma=" + std::to_string(st.sigma_k));

    double delta = params.delta;
    const double delta_min = params.delta_min > 0.0 ? params.delta_min : params.delta / 64.0;
    bool stalled = false;
    int outer = 0;
    while (st.sigma_k > tol_abs && outer < params.max_outer && !stalled) {
        ++outer;
        const InnerState snapshot = st;
        const std::size_t trace_mark = trace.rows.size();
        InnerState grown = st;
        try {
            grown = detail::free_phase_core(s, st, st.epsilon + delta, params, &trace);
        } catch (const ConvergenceError& ex) {
            log_info(std::string("continuation stalled: ") + ex.what());
            stalled = true;
            break;
        }
        if (grown.stop == StopReason::ReachedTolerance && delta > delta_min) {
            // Overshot inside the growth phase: retry the increment at half size.
            // Rows from the discarded attempt are dropped so the trace records
            // only the committed trajectory.
            delta /= 2.0;
            st = snapshot;
            trace.rows.resize(trace_mark);
            continue;
        }
        st = detail::inner_iteration_core(s, grown, params, &trace);
        if (st.sigma_k <= tol_abs) {
            if (delta > delta_min) {
                delta /= 2.0;
                st = snapshot;
                trace.rows.resize(trace_mark);
                continue;
            }
            break;
        }
        log_debug("outer phase " + std::to_string(outer) + ": eps=" + std::to_string(st.epsilon) +
                  " sigma=" + std::to_string(st.sigma_k) + " delta=" + std::to_string(delta));
        delta = std::min(delta * 2.0, std::max(0.5 * st.epsilon, params.delta));
    }

    result.converged = st.sigma_k <= tol_abs;
    if (!result.converged)
        log_info("agcd_ode: stopping without convergence (sigma_k=" +
                 std::to_string(st.sigma_k) + ", tol=" + std::to_string(tol_abs) + ")");
    result.epsilon = st.epsilon;
    result.matrix_distance = st.epsilon;
    result.sigma_final = st.sigma_k;
    const PolyPair hat = perturbed_pair(s, st.epsilon, st.e);
    result.a_hat = hat.a;
    result.b_hat = hat.b;
    result.coeff_distance = dist(p, hat);
    detail::extract_factorization(hat, d, ell, result);
    return {std::move(result), std::move(trace)};
}

}  // namespace agcd
