#pragma once

#include <span>

#include "relax/error.hpp"
#include "relax/vec.hpp"

namespace relax {

struct IntegratorOptions {
    bool semi_implicit = false;  // r' = r + v'·dt instead of r + v·dt
    double max_step = 0.0;       // cap on |r' - r|; 0 disables
};

struct PhasePoint {
    Vector r;
    Vector v;
};

/// Forward Euler: v' = v + (F/m)·dt, r' = r + v·dt.
inline PhasePoint euler_step(std::span<const double> r, std::span<const double> v,
                             std::span<const double> force, double dt, double mass = 1.0,
                             const IntegratorOptions& opts = {}) {
    if (r.size() != v.size() || r.size() != force.size())
        throw InputError("euler_step: shape mismatch");
    if (!(dt > 0.0)) throw InputError("euler_step: dt must be positive");
    if (!(mass > 0.0)) throw InputError("euler_step: mass must be positive");
    PhasePoint out{Vector(r.begin(), r.end()), axpy(v, dt / mass, force)};
    Vector dx = scaled(opts.semi_implicit ? std::span<const double>(out.v) : v, dt);
    if (opts.max_step > 0.0) {
        const double len = norm(dx);
        if (len > opts.max_step) dx = scaled(dx, opts.max_step / len);
    }
    for (std::size_t i = 0; i < dx.size(); ++i) out.r[i] += dx[i];
    return out;
}

}  // namespace relax
