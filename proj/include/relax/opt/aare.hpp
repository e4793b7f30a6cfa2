#pragma once

// AARE: MD with the velocity redirected along a conjugate direction whose
// beta formula is chosen by the angle between the new force and the previous
// direction, plus a one-shot backtrack when a step overshoots.

#include <algorithm>
#include <functional>
#include <span>
#include <string>

#include "relax/error.hpp"
#include "relax/opt/directions.hpp"
#include "relax/opt/integrator.hpp"
#include "relax/opt/report.hpp"
#include "relax/opt/tracker.hpp"
#include "relax/pes/potential.hpp"

namespace relax {

enum class BetaKind { pr, fr };

struct AareState {
    Vector r;
    Vector v;
    double dt = 0.0;
    std::uint64_t k = 1;
    Vector d_prev;
    Vector f_prev;
    Vector f_cached;
};

struct AareParams : StopCriteria {
    double dt_start = 0.1;
    double dt_max = 1.0;
    double f_inc = 1.1;
    double f_dec = 0.5;
    double mass = 1.0;
    BetaKind beta_kind = BetaKind::pr;
    double theta_hs_lo = 90.0;
    double theta_sd_hi = 120.0;
    IntegratorOptions integrator{false, 1.0};
    /// Called once per iteration after the velocity redirection, before the advance.
    std::function<void(const AareState&)> observer;

    void validate() const {
        StopCriteria::validate();
        if (!(dt_start > 0.0)) throw InputError("dt_start must be positive");
        if (!(dt_max >= dt_start)) throw InputError("dt_max must be >= dt_start");
        if (!(f_inc > 1.0)) throw InputError("f_inc must exceed 1");
        if (!(f_dec > 0.0 && f_dec < 1.0)) throw InputError("f_dec must lie in (0, 1)");
        if (!(mass > 0.0)) throw InputError("mass must be positive");
        if (!(theta_hs_lo < theta_sd_hi)) throw InputError("theta_hs_lo must be below theta_sd_hi");
        if (!(integrator.max_step >= 0.0)) throw InputError("max_step must be >= 0");
    }
};

enum class AareBand { conjugate, hs, sd };

/// Bands are [0, lo), [lo, hi), [hi, 180].
inline AareBand aare_band(double theta, double lo = 90.0, double hi = 120.0) {
    if (theta < lo) return AareBand::conjugate;
    if (theta < hi) return AareBand::hs;
    return AareBand::sd;
}

inline RunReport run_aare(const Potential& p, std::span<const double> r0, const AareParams& params = {}) {
    params.validate();
    const bool fr = params.beta_kind == BetaKind::fr;
    return detail::drive(p, r0, fr ? "aare-fr" : "aare-pr", params, [&](detail::Tracker& t) {
        AareState s{Vector(r0.begin(), r0.end()), Vector(r0.size(), 0.0), params.dt_start, 1, {}, {}, {}};
        t.step = s.dt;
        s.f_cached = t.eval(s.r).force;
        std::string last_kind;
        for (;;) {
            t.iteration = s.k;
            const Vector& f = s.f_cached;
            Vector d = f;
            if (s.k > 1) {
                const double theta = angle_theta(f, s.d_prev);
                const AareBand band = aare_band(theta, params.theta_hs_lo, params.theta_sd_hi);
                std::optional<double> beta = 0.0;
                std::string kind = "sd";
                if (band == AareBand::conjugate) {
                    beta = fr ? beta_fr(f, s.f_prev) : beta_pr(f, s.f_prev);
                    kind = fr ? "fr" : "pr";
                } else if (band == AareBand::hs) {
                    beta = beta_hs(f, s.f_prev, s.d_prev);
                    kind = "hs";
                }
                if (!beta) t.event(EventKind::beta_fallback, theta, 0.0, s.r, kind);
                if (kind != last_kind) t.event(EventKind::direction_switch, theta, beta.value_or(0.0), s.r, kind);
                last_kind = kind;
                d = axpy(f, beta.value_or(0.0), s.d_prev);

                const double before = s.dt;
                if (band == AareBand::conjugate) {
                    s.dt = std::min(s.dt * params.f_inc, params.dt_max);
                    if (s.dt != before) t.event(EventKind::dt_increase, before, s.dt);
                } else if (band == AareBand::hs) {
                    s.dt *= params.f_dec;
                    t.event(EventKind::dt_decrease, before, s.dt);
                }
            }
            s.v = redirect_velocity(s.v, d);
            if (params.observer) params.observer(s);

            const Vector r_pre = s.r;
            const Vector v_pre = s.v;
            PhasePoint next = euler_step(s.r, s.v, f, s.dt, params.mass, params.integrator);
            t.step = s.dt;
            Vector f_new = t.eval(next.r).force;
            if (angle_theta(f_new, d) > params.theta_sd_hi) {
                const double before = s.dt;
                s.dt *= params.f_dec;
                t.event(EventKind::overshoot_backtrack, before, s.dt, r_pre);
                next = euler_step(r_pre, scaled(v_pre, 0.5), f, s.dt, params.mass, params.integrator);
                t.step = s.dt;
                f_new = t.eval(next.r).force;
            }
            s.r = std::move(next.r);
            s.v = std::move(next.v);
            s.d_prev = std::move(d);
            s.f_prev = f;
            s.f_cached = std::move(f_new);
            ++s.k;
        }
    });
}

}  // namespace relax
