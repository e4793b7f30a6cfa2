#pragma once

// Endpoint location for the LEPS bands.

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <vector>
#include <utility>

#include "relax/error.hpp"
#include "relax/opt/reference.hpp"
#include "relax/pes/leps.hpp"
#include "relax/pes/potential.hpp"

namespace relax {

inline constexpr double kEndpointTol = 1e-8;

namespace endpoint_detail {

/// Newton iterations on F(r) = 0 with a central-difference Jacobian of the
/// analytic force. Returns nullopt unless it reaches f_tol at a point whose
/// Hessian is positive definite.
inline std::optional<Vector> newton_polish(const Potential& p, Vector r, double f_tol, int max_iter = 20) {
    const std::size_t n = r.size();
    for (int it = 0; it <= max_iter; ++it) {
        const Vector f = p.evaluate(r).force;
        // H = -dF/dr, row-major.
        std::vector<double> h(n * n);
        for (std::size_t c = 0; c < n; ++c) {
            const double step = 1e-6 * std::max(1.0, std::abs(r[c]));
            Vector up = r, dn = r;
            up[c] += step;
            dn[c] -= step;
            const Vector fu = p.evaluate(up).force, fd = p.evaluate(dn).force;
            for (std::size_t i = 0; i < n; ++i) h[i * n + c] = -(fu[i] - fd[i]) / (2.0 * step);
        }
        // Cholesky both proves a minimum and solves H dx = F.
        std::vector<double> l(n * n, 0.0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j <= i; ++j) {
                double acc = 0.5 * (h[i * n + j] + h[j * n + i]);
                for (std::size_t k = 0; k < j; ++k) acc -= l[i * n + k] * l[j * n + k];
                if (i == j) {
                    if (!(acc > 0.0)) return std::nullopt;
                    l[i * n + i] = std::sqrt(acc);
                } else {
                    l[i * n + j] = acc / l[j * n + j];
                }
            }
        if (norm(f) < f_tol) return r;
        if (it == max_iter) break;
        Vector y(n), dx(n);
        for (std::size_t i = 0; i < n; ++i) {
            double acc = f[i];
            for (std::size_t k = 0; k < i; ++k) acc -= l[i * n + k] * y[k];
            y[i] = acc / l[i * n + i];
        }
        for (std::size_t i = n; i-- > 0;) {
            double acc = y[i];
            for (std::size_t k = i + 1; k < n; ++k) acc -= l[k * n + i] * dx[k];
            dx[i] = acc / l[i * n + i];
        }
        r = add(r, dx);
    }
    return std::nullopt;
}

}  // namespace endpoint_detail

/// Relaxes `guess` with PR-CG and golden-section line search to ‖F‖ < f_tol.
/// An energy-only line search cannot resolve much below ‖F‖ ~ 1e-7 on a stiff
/// well, so a run that stalls there is finished by Newton steps on the force.
inline Vector locate_minimum(const Potential& p, std::span<const double> guess, double f_tol = kEndpointTol) {
    ReferenceParams rp;
    rp.f_tol = f_tol;
    rp.max_evals = 100000;
    rp.interval_tol = 1e-10;
    const RunReport r = run_reference(p, guess, rp);
    if (r.converged) return r.final_r;
    if (r.status == RunStatus::stationary && !r.final_r.empty())
        if (auto polished = endpoint_detail::newton_polish(p, r.final_r, f_tol)) return *polished;
    throw NumericalError("endpoint location did not converge: " + r.message, r.final_r);
}

/// Same, with the coordinates outside `free` held at their value in `guess`.
inline Vector locate_constrained_minimum(const Potential& p, std::span<const double> guess,
                                         std::vector<std::size_t> free, double f_tol = kEndpointTol) {
    PinnedPotential pinned(borrow(p), Vector(guess.begin(), guess.end()), free);
    Vector sub_guess;
    for (auto i : free) sub_guess.push_back(guess[i]);
    return pinned.expand(locate_minimum(pinned, sub_guess, f_tol));
}

/// LEPS-I has no finite minima: its valleys run out to dissociation. The
/// endpoints hold the dissociated distance at `far` and relax the bonded one.
inline std::pair<Vector, Vector> leps1_endpoints(const Leps1& p, double far = 3.0) {
    const double r0 = p.params().r0;
    return {locate_constrained_minimum(p, Vector{r0, far}, {0}),
            locate_constrained_minimum(p, Vector{far, r0}, {1})};
}

/// LEPS-II has two true minima, one on each side of the barrier.
inline std::pair<Vector, Vector> leps2_endpoints(const Leps2& p) {
    const double r0 = p.params().r0;
    const double r_far = p.params().r_ac_fixed - r0;
    return {locate_minimum(p, Vector{r0, p.relaxed_coupling(r0)}),
            locate_minimum(p, Vector{r_far, p.relaxed_coupling(r_far)})};
}

}  // namespace relax
