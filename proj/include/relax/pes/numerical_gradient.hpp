#pragma once

#include <span>

#include "relax/error.hpp"
#include "relax/pes/potential.hpp"

namespace relax {

/// Central-difference force -(U(r + h e_i) - U(r - h e_i)) / 2h. Goes through
/// Potential::energy(), so a CountingPotential does not see these calls.
inline Vector numerical_gradient(const Potential& p, std::span<const double> r, double h = 1e-5) {
    if (!(h > 0.0)) throw InputError("numerical_gradient: step must be positive");
    Vector x(r.begin(), r.end());
    Vector force(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double saved = x[i];
        x[i] = saved + h;
        const double up = p.energy(x);
        x[i] = saved - h;
        const double down = p.energy(x);
        x[i] = saved;
        force[i] = -(up - down) / (2.0 * h);
    }
    return force;
}

}  // namespace relax
