#pragma once

// FIRE and two variants that replace the Step-4 velocity mixing: FIRE-SD
// aligns the velocity with the force, FIRE-PR with a Polak-Ribiere conjugate
// direction. Braking, latency and time-step control are shared.

#include <algorithm>
#include <functional>
#include <span>

#include "relax/error.hpp"
#include "relax/opt/directions.hpp"
#include "relax/opt/integrator.hpp"
#include "relax/opt/report.hpp"
#include "relax/opt/tracker.hpp"
#include "relax/pes/potential.hpp"

namespace relax {

struct FireState {
    Vector r;
    Vector v;
    double dt = 0.0;
    double alpha = 0.0;
    int n_p = 0;
    double t = 0.0;
};

struct FireParams : StopCriteria {
    double alpha_start = 0.1;
    double f_alpha = 0.99;
    double f_inc = 1.1;
    double f_dec = 0.5;
    double dt_start = 0.1;
    double dt_max = 1.0;
    int n_min = 5;
    double mass = 1.0;
    IntegratorOptions integrator{false, 0.2};
    bool brake_on_zero_velocity = false;  // literal P <= 0 braking on the first step
    /// Called once per iteration after the power-factor branch, before the advance.
    std::function<void(const FireState&)> observer;

    void validate() const {
        StopCriteria::validate();
        if (!(alpha_start >= 0.0 && alpha_start <= 1.0)) throw InputError("alpha_start must lie in [0, 1]");
        if (!(f_alpha > 0.0 && f_alpha <= 1.0)) throw InputError("f_alpha must lie in (0, 1]");
        if (!(f_inc > 1.0)) throw InputError("f_inc must exceed 1");
        if (!(f_dec > 0.0 && f_dec < 1.0)) throw InputError("f_dec must lie in (0, 1)");
        if (!(dt_start > 0.0)) throw InputError("dt_start must be positive");
        if (!(dt_max >= dt_start)) throw InputError("dt_max must be >= dt_start");
        if (n_min < 0) throw InputError("n_min must be >= 0");
        if (!(mass > 0.0)) throw InputError("mass must be positive");
        if (!(integrator.max_step >= 0.0)) throw InputError("max_step must be >= 0");
    }
};

enum class FireVariant { mix, sd, pr };

inline RunReport run_fire_variant(const Potential& p, std::span<const double> r0, const FireParams& params,
                                  FireVariant variant) {
    params.validate();
    const char* name = variant == FireVariant::mix ? "fire" : variant == FireVariant::sd ? "fire-sd" : "fire-pr";
    return detail::drive(p, r0, name, params, [&](detail::Tracker& t) {
        FireState s{Vector(r0.begin(), r0.end()), Vector(r0.size(), 0.0), params.dt_start,
                    variant == FireVariant::mix ? params.alpha_start : 1.0, 0, 0.0};
        Vector d_prev, f_prev;
        t.step = s.dt;
        Vector f = t.eval(s.r).force;
        for (;;) {
            ++t.iteration;
            const double power = dot(f, s.v);
            const double speed = norm(s.v);

            switch (variant) {
                case FireVariant::mix: s.v = fire_velocity_mix(s.v, f, s.alpha); break;
                case FireVariant::sd: s.v = fire_velocity_mix(s.v, f, 1.0); break;
                case FireVariant::pr: {
                    Vector d = f;
                    if (!d_prev.empty()) {
                        auto beta = beta_pr(f, f_prev);
                        if (!beta) t.event(EventKind::beta_fallback, kUnset, 0.0, s.r, "pr");
                        d = axpy(f, beta.value_or(0.0), d_prev);
                    }
                    s.v = redirect_velocity(s.v, d);
                    d_prev = std::move(d);
                    f_prev = f;
                    break;
                }
            }

            if (power > 0.0) {
                if (++s.n_p > params.n_min) {
                    const double before = s.dt;
                    s.dt = std::min(s.dt * params.f_inc, params.dt_max);
                    if (s.dt != before) t.event(EventKind::dt_increase, before, s.dt);
                    if (variant == FireVariant::mix) s.alpha *= params.f_alpha;
                }
            } else if (power < 0.0 || speed > 0.0 || params.brake_on_zero_velocity) {
                const double before = s.dt;
                s.dt *= params.f_dec;
                std::fill(s.v.begin(), s.v.end(), 0.0);
                s.alpha = variant == FireVariant::mix ? params.alpha_start : 1.0;
                s.n_p = 0;
                t.event(EventKind::brake, before, s.dt, s.r);
            }
            if (params.observer) params.observer(s);

            PhasePoint next = euler_step(s.r, s.v, f, s.dt, params.mass, params.integrator);
            s.r = std::move(next.r);
            s.v = std::move(next.v);
            s.t += s.dt;
            t.step = s.dt;
            f = t.eval(s.r).force;
        }
    });
}

inline RunReport run_fire(const Potential& p, std::span<const double> r0, const FireParams& params = {}) {
    return run_fire_variant(p, r0, params, FireVariant::mix);
}

}  // namespace relax
