#pragma once

#include <cmath>
#include <vector>

#include "relax/pes/potential.hpp"
#include "relax/vec.hpp"

namespace relax::testing {

/// Halton sequence point `index` (1-based) mapped into the box [lo, hi]^dim.
inline Vector halton_point(std::size_t index, std::size_t dim, double lo, double hi) {
    static constexpr unsigned primes[] = {2, 3, 5, 7, 11, 13, 17, 19};
    Vector out(dim);
    for (std::size_t d = 0; d < dim; ++d) {
        double f = 1.0, r = 0.0;
        for (std::size_t i = index; i > 0; i /= primes[d]) {
            f /= primes[d];
            r += f * double(i % primes[d]);
        }
        out[d] = lo + (hi - lo) * r;
    }
    return out;
}

/// First-order saddle of a 2D surface: coarse grid scan of |F| for a point
/// with an indefinite Hessian, then Newton on F = 0 with a finite-difference Jacobian.
inline Vector grid_saddle(const Potential& p, Vector lo, Vector hi, double step) {
    auto hessian_det = [&](const Vector& r) {
        const double h = 1e-5;
        double j[2][2];
        for (int c = 0; c < 2; ++c) {
            Vector up = r, dn = r;
            up[c] += h;
            dn[c] -= h;
            const auto fu = p.evaluate(up).force, fd = p.evaluate(dn).force;
            for (int rI = 0; rI < 2; ++rI) j[rI][c] = -(fu[rI] - fd[rI]) / (2 * h);
        }
        return j[0][0] * j[1][1] - j[0][1] * j[1][0];
    };
    Vector best;
    double best_norm = 1e300;
    for (double x = lo[0]; x <= hi[0]; x += step)
        for (double y = lo[1]; y <= hi[1]; y += step) {
            const Vector r{x, y};
            const double n = norm(p.evaluate(r).force);
            if (n < best_norm && hessian_det(r) < 0) best_norm = n, best = r;
        }
    for (int it = 0; it < 50; ++it) {
        const auto f = p.evaluate(best).force;
        if (norm(f) < 1e-12) break;
        const double h = 1e-6;
        double j[2][2];
        for (int c = 0; c < 2; ++c) {
            Vector up = best, dn = best;
            up[c] += h;
            dn[c] -= h;
            const auto fu = p.evaluate(up).force, fd = p.evaluate(dn).force;
            for (int rI = 0; rI < 2; ++rI) j[rI][c] = (fu[rI] - fd[rI]) / (2 * h);
        }
        const double det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
        best[0] -= (j[1][1] * f[0] - j[0][1] * f[1]) / det;
        best[1] -= (-j[1][0] * f[0] + j[0][0] * f[1]) / det;
    }
    return best;
}

}  // namespace relax::testing
