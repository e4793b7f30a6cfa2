#pragma once

// Classical steepest descent and Polak-Ribiere CG with a golden-section line
// search on the energy. Line-search probes call Potential::energy() and are not
// force evaluations; only the accepted point of each line search is counted.

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>

#include "relax/error.hpp"
#include "relax/opt/directions.hpp"
#include "relax/opt/report.hpp"
#include "relax/opt/tracker.hpp"
#include "relax/pes/potential.hpp"

namespace relax {

enum class ReferenceMethod { sd, cg_pr };

struct ReferenceParams : StopCriteria {
    ReferenceMethod method = ReferenceMethod::cg_pr;
    double interval_tol = 1e-6;  // on step length
    double initial_bracket = 0.1;
    int max_bracket_growth = 200;

    void validate() const {
        StopCriteria::validate();
        if (!(interval_tol > 0.0)) throw InputError("interval_tol must be positive");
        if (!(initial_bracket > 0.0)) throw InputError("initial_bracket must be positive");
    }
};

/// Energy along r + a·d̂; points outside the domain or with non-finite energy read as +inf.
inline double line_energy(const Potential& p, std::span<const double> r, std::span<const double> dh, double a) {
    try {
        return p.energy(axpy(r, a, dh));
    } catch (const DomainError&) {
        return std::numeric_limits<double>::infinity();
    } catch (const NumericalError&) {
        return std::numeric_limits<double>::infinity();
    }
}

/// Minimizes a -> U(r + a·d̂) over a >= 0: expands [0, b] until the energy
/// rises, then golden-section until the interval is below tol·min(1, b - a).
inline double golden_section_step(const Potential& p, std::span<const double> r, std::span<const double> dh,
                                  double tol = 1e-6, double initial = 0.1, int max_growth = 200) {
    constexpr double phi = 1.6180339887498949;
    const double u0 = line_energy(p, r, dh, 0.0);
    double a = 0.0, b = initial;
    double ub = line_energy(p, r, dh, b);
    if (ub < u0) {
        double m = b, um = ub;
        b = m * phi;
        ub = line_energy(p, r, dh, b);
        for (int i = 0; ub < um && i < max_growth; ++i) {
            a = m;
            m = b;
            um = ub;
            b = m + phi * (m - a);
            ub = line_energy(p, r, dh, b);
        }
    }
    const double invphi = 1.0 / phi;
    const double width = tol * std::min(1.0, b - a);
    double c = b - (b - a) * invphi, d = a + (b - a) * invphi;
    double uc = line_energy(p, r, dh, c), ud = line_energy(p, r, dh, d);
    while (b - a > width) {
        if (uc < ud) {
            b = d;
            d = c;
            ud = uc;
            c = b - (b - a) * invphi;
            uc = line_energy(p, r, dh, c);
        } else {
            a = c;
            c = d;
            uc = ud;
            d = a + (b - a) * invphi;
            ud = line_energy(p, r, dh, d);
        }
    }
    return 0.5 * (a + b);
}

inline constexpr int kReferenceStallLimit = 50;

inline RunReport run_reference(const Potential& p, std::span<const double> r0, const ReferenceParams& params = {}) {
    params.validate();
    const bool cg = params.method == ReferenceMethod::cg_pr;
    return detail::drive(p, r0, cg ? "ref-cg" : "ref-sd", params, [&](detail::Tracker& t) {
        Vector r(r0.begin(), r0.end());
        Evaluation e = t.eval(r);
        Vector f = std::move(e.force);
        Vector d_prev, f_prev;
        // Near a stiff minimum the energy stops resolving the line; give up
        // once neither energy nor force has improved for a while instead of cycling.
        double best = e.energy, best_norm = norm(f);
        int stalled = 0;
        for (;;) {
            ++t.iteration;
            Vector d = f;
            if (cg && !d_prev.empty()) {
                auto beta = beta_pr(f, f_prev);
                if (!beta) t.event(EventKind::beta_fallback, kUnset, 0.0, r, "pr");
                d = axpy(f, beta.value_or(0.0), d_prev);
                if (dot(f, d) <= 0.0) {
                    t.event(EventKind::direction_restart, beta.value_or(0.0), 0.0, r);
                    d = f;
                }
            }
            const double dn = norm(d);
            if (dn == 0.0) throw DegenerateError("reference: zero search direction");
            const Vector dh = scaled(d, 1.0 / dn);
            const double a = golden_section_step(p, r, dh, params.interval_tol,
                                                 std::min(params.initial_bracket, 10.0 * norm(f)),
                                                 params.max_bracket_growth);
            if (!(a > 0.0)) throw DegenerateError("reference: line search made no progress");
            t.step = a;
            r = axpy(r, a, dh);
            f_prev = std::move(f);
            d_prev = std::move(d);
            e = t.eval(r);
            f = std::move(e.force);
            if (e.energy < best || norm(f) < best_norm) {
                best = std::min(best, e.energy);
                best_norm = std::min(best_norm, norm(f));
                stalled = 0;
            } else if (++stalled >= kReferenceStallLimit) {
                throw DegenerateError("reference: energy stopped decreasing at the line-search resolution limit");
            }
        }
    });
}

}  // namespace relax
