#pragma once

// Accelerated CG: Polak-Ribiere directions with a line search that only asks
// for the force to end up roughly orthogonal to the search direction.

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <span>

#include "relax/error.hpp"
#include "relax/opt/directions.hpp"
#include "relax/opt/report.hpp"
#include "relax/opt/tracker.hpp"
#include "relax/pes/potential.hpp"

namespace relax {

struct AccCgState {
    Vector r;
    Vector d;
    Vector f;
    Vector f_prev;     // empty before the first accepted step
    Vector s_prev;     // last accepted displacement
    double alpha_step = 0.0;
    double alpha_prev = 0.0;
    std::uint64_t k = 1;
};

/// Replaces the angle-bracketing search by an exact minimization along d̂.
/// Receives (r, d̂) and returns the step length.
using LineMinimizer = std::function<double(std::span<const double>, std::span<const double>)>;

struct AccCgParams : StopCriteria {
    double default_step = 0.1;
    double cap_factor = 2.0;
    double theta_lo = 80.0;
    double theta_hi = 100.0;
    int max_refines = 8;
    bool restart_on_ascent = true;  // d = F whenever F·d <= 0
    LineMinimizer exact_line_search;

    void validate() const {
        StopCriteria::validate();
        if (!(default_step > 0.0)) throw InputError("default_step must be positive");
        if (!(cap_factor >= 1.0)) throw InputError("cap_factor must be >= 1");
        if (!(theta_lo < 90.0 && theta_hi > 90.0)) throw InputError("acceptance band must straddle 90 degrees");
        if (max_refines < 1) throw InputError("max_refines must be >= 1");
    }
};

struct NewtonStep {
    double alpha = 0.0;
    bool fallback = false;  // default_step used because no positive curvature estimate exists
    bool capped = false;
};

/// alpha = (F·d̂)/kappa with kappa = ((F_prev - F)·d̂)/(s_prev·d̂), clamped to
/// cap_factor·alpha_prev once a previous step exists.
inline NewtonStep newton_initial_step(const AccCgState& s, const AccCgParams& params = {}) {
    const double dn = norm(s.d);
    if (dn == 0.0) throw DegenerateError("newton_initial_step: zero search direction");
    const Vector dh = scaled(s.d, 1.0 / dn);
    NewtonStep out{params.default_step, true, false};
    if (!s.f_prev.empty() && !s.s_prev.empty()) {
        const double den = dot(s.s_prev, dh);
        const double kappa = den != 0.0 ? dot(sub(s.f_prev, s.f), dh) / den : 0.0;
        const double alpha = dot(s.f, dh) / kappa;
        if (kappa > 0.0 && std::isfinite(kappa) && std::isfinite(alpha) && alpha > 0.0) out = {alpha, false, false};
    }
    if (s.alpha_prev > 0.0 && out.alpha > params.cap_factor * s.alpha_prev) {
        out.alpha = params.cap_factor * s.alpha_prev;
        out.capped = true;
    }
    return out;
}

struct LinePoint {
    double alpha = 0.0;
    Vector r;
    Vector f;
    double theta = 0.0;
};

struct RefineResult {
    LinePoint best;
    int refines = 0;
    bool exhausted = false;
};

namespace detail {

/// Angle to the search direction; a point with exactly zero force counts as 90 degrees.
inline double line_theta(std::span<const double> f, std::span<const double> d) {
    return norm(f) == 0.0 ? 90.0 : angle_theta(f, d);
}

/// Regula falsi on g(a) = -F(r_base + a·d̂)·d̂ inside [lo, hi]; requires g(lo) < 0 < g(hi).
/// Returns the evaluated point whose angle is closest to 90 degrees; ties (as
/// in 1D, where every angle is 0 or 180) go to the smaller |g|.
template <class Eval>
RefineResult secant_refine_impl(Eval&& eval, std::span<const double> r_base, std::span<const double> d,
                                LinePoint lo, LinePoint hi, const AccCgParams& params) {
    const Vector dh = scaled(d, 1.0 / norm(d));
    double g_lo = -dot(lo.f, dh);
    double g_hi = -dot(hi.f, dh);
    if (!(g_lo < 0.0 && g_hi > 0.0) || !(lo.alpha < hi.alpha))
        throw ContractError("secant_refine: directional derivative does not change sign over the bracket");
    RefineResult out{hi, 0, false};
    double g_best = g_hi;
    for (int i = 0; i < params.max_refines; ++i) {
        const double a = lo.alpha - g_lo * (hi.alpha - lo.alpha) / (g_hi - g_lo);
        LinePoint trial{a, axpy(r_base, a, dh), {}, 0.0};
        trial.f = eval(trial.r);
        trial.theta = line_theta(trial.f, d);
        ++out.refines;
        const double g = -dot(trial.f, dh);
        const double gap = std::abs(trial.theta - 90.0), best_gap = std::abs(out.best.theta - 90.0);
        if (gap < best_gap || (gap == best_gap && std::abs(g) < std::abs(g_best))) {
            out.best = trial;
            g_best = g;
        }
        if (trial.theta >= params.theta_lo && trial.theta <= params.theta_hi) return out;
        if (g < 0.0) {
            lo = std::move(trial);
            g_lo = g;
        } else {
            hi = std::move(trial);
            g_hi = g;
        }
    }
    out.exhausted = true;
    return out;
}

}  // namespace detail

/// Standalone refinement from the base point (alpha = 0) and an overshoot at alpha_hi.
/// Evaluates through p.evaluate(), so wrap p in a CountingPotential to count.
inline RefineResult secant_refine(const Potential& p, std::span<const double> r_base, std::span<const double> d,
                                  double alpha_hi, std::span<const double> f_base, std::span<const double> f_hi,
                                  const AccCgParams& params = {}) {
    if (norm(d) == 0.0) throw DegenerateError("secant_refine: zero search direction");
    const Vector dh = scaled(d, 1.0 / norm(d));
    LinePoint lo{0.0, Vector(r_base.begin(), r_base.end()), Vector(f_base.begin(), f_base.end()), 0.0};
    LinePoint hi{alpha_hi, axpy(r_base, alpha_hi, dh), Vector(f_hi.begin(), f_hi.end()), 0.0};
    lo.theta = detail::line_theta(lo.f, d);
    hi.theta = detail::line_theta(hi.f, d);
    return detail::secant_refine_impl([&](std::span<const double> r) { return p.evaluate(r).force; }, r_base, d,
                                      std::move(lo), std::move(hi), params);
}

inline RunReport run_acc_cg(const Potential& p, std::span<const double> r0, const AccCgParams& params = {}) {
    params.validate();
    return detail::drive(p, r0, "acc-cg", params, [&](detail::Tracker& t) {
        auto eval = [&](std::span<const double> r) { return t.eval(r).force; };
        AccCgState s;
        s.r.assign(r0.begin(), r0.end());
        s.f = eval(s.r);
        Vector d_prev;
        for (;;) {
            t.iteration = s.k;
            s.d = s.f;
            if (!d_prev.empty()) {
                auto beta = beta_pr(s.f, s.f_prev);
                if (!beta) t.event(EventKind::beta_fallback, kUnset, 0.0, s.r, "pr");
                s.d = axpy(s.f, beta.value_or(0.0), d_prev);
                if (params.restart_on_ascent && dot(s.f, s.d) <= 0.0) {
                    t.event(EventKind::direction_restart, beta.value_or(0.0), 0.0, s.r);
                    s.d = s.f;
                }
            }
            const double dn = norm(s.d);
            if (dn == 0.0) throw DegenerateError("acc-cg: zero search direction");
            const Vector dh = scaled(s.d, 1.0 / dn);

            LinePoint accepted;
            if (params.exact_line_search) {
                const double a = params.exact_line_search(s.r, dh);
                accepted = {a, axpy(s.r, a, dh), {}, 0.0};
                t.step = a;
                accepted.f = eval(accepted.r);
                accepted.theta = angle_theta(accepted.f, s.d);
                t.event(EventKind::step_accepted, a, accepted.theta, accepted.r);
            } else {
                const NewtonStep ns = newton_initial_step(s, params);
                if (ns.fallback && s.k > 1) t.event(EventKind::newton_fallback, kUnset, ns.alpha, s.r);
                double a = ns.alpha;
                LinePoint lo{0.0, s.r, s.f, angle_theta(s.f, s.d)};
                for (;;) {
                    t.step = a;
                    LinePoint trial{a, axpy(s.r, a, dh), {}, 0.0};
                    trial.f = eval(trial.r);
                    trial.theta = angle_theta(trial.f, s.d);
                    if (trial.theta < params.theta_lo) {
                        t.event(EventKind::step_doubling, a, 2.0 * a, trial.r);
                        lo = std::move(trial);
                        a *= 2.0;
                        continue;
                    }
                    if (trial.theta > params.theta_hi) {
                        const auto before = t.n_evals();
                        RefineResult rr = detail::secant_refine_impl(eval, s.r, s.d, std::move(lo), std::move(trial), params);
                        t.event(EventKind::secant_refine, a, rr.best.alpha, rr.best.r,
                                std::to_string(t.n_evals() - before) + " refines");
                        if (rr.exhausted) t.event(EventKind::refine_exhausted, kUnset, rr.best.theta, rr.best.r);
                        accepted = std::move(rr.best);
                    } else {
                        accepted = std::move(trial);
                    }
                    break;
                }
                t.event(EventKind::step_accepted, accepted.alpha, accepted.theta, accepted.r);
            }

            s.s_prev = sub(accepted.r, s.r);
            s.alpha_prev = accepted.alpha;
            s.f_prev = std::move(s.f);
            d_prev = s.d;
            s.r = std::move(accepted.r);
            s.f = std::move(accepted.f);
            ++s.k;
        }
    });
}

}  // namespace relax
