#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <span>

#include "relax/error.hpp"
#include "relax/vec.hpp"

namespace relax {

/// (1 - alpha)·v + alpha·|v|·F̂
inline Vector fire_velocity_mix(std::span<const double> v, std::span<const double> force, double alpha) {
    if (v.size() != force.size()) throw InputError("fire_velocity_mix: shape mismatch");
    const double speed = norm(v);
    if (speed == 0.0) return Vector(v.size(), 0.0);
    if (alpha == 0.0) return Vector(v.begin(), v.end());
    const double fn = norm(force);
    if (fn == 0.0) throw DegenerateError("fire_velocity_mix: zero force with non-zero velocity");
    Vector out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i)
        out[i] = (1.0 - alpha) * v[i] + alpha * speed * force[i] / fn;
    return out;
}

/// |v|·d̂. Preserves speed.
inline Vector redirect_velocity(std::span<const double> v, std::span<const double> d) {
    if (v.size() != d.size()) throw InputError("redirect_velocity: shape mismatch");
    const double dn = norm(d);
    if (dn == 0.0) throw DegenerateError("redirect_velocity: zero-length direction");
    return scaled(d, norm(v) / dn);
}

/// Each returns nullopt when the denominator vanishes or the quotient is not finite.
inline std::optional<double> beta_hs(std::span<const double> f, std::span<const double> f_prev,
                                     std::span<const double> d_prev) {
    const Vector y = sub(f, f_prev);
    const double den = dot(d_prev, y);
    const double b = dot(f, y) / den;
    if (den == 0.0 || !std::isfinite(b)) return std::nullopt;
    return b;
}

inline std::optional<double> beta_pr(std::span<const double> f, std::span<const double> f_prev) {
    const double den = dot(f_prev, f_prev);
    const double b = dot(f, sub(f, f_prev)) / den;
    if (den == 0.0 || !std::isfinite(b)) return std::nullopt;
    return b;
}

inline std::optional<double> beta_fr(std::span<const double> f, std::span<const double> f_prev) {
    const double den = dot(f_prev, f_prev);
    const double b = dot(f, f) / den;
    if (den == 0.0 || !std::isfinite(b)) return std::nullopt;
    return b;
}

/// Angle between f and d in degrees, in [0, 180].
inline double angle_theta(std::span<const double> f, std::span<const double> d) {
    if (f.size() != d.size()) throw InputError("angle_theta: shape mismatch");
    const double fn = norm(f), dn = norm(d);
    if (fn == 0.0 || dn == 0.0) throw DegenerateError("angle_theta: zero-length vector");
    // 2·atan2(|f̂ - d̂|, |f̂ + d̂|) stays accurate near 0 and 180 where acos does not.
    double diff = 0.0, sum = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double a = f[i] / fn, b = d[i] / dn;
        diff += (a - b) * (a - b);
        sum += (a + b) * (a + b);
    }
    return 2.0 * std::atan2(std::sqrt(diff), std::sqrt(sum)) * 180.0 / std::numbers::pi;
}

}  // namespace relax
