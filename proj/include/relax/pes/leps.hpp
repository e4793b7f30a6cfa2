#pragma once

// London-Eyring-Polanyi-Sato model surfaces for a collinear A-B-C system.
//
//   V = sum_k Q_k/w_k - sqrt( sum_k J_k^2/w_k^2 - sum_{k<l} J_k J_l/(w_k w_l) )
//   Q(r) = d/2 (3/2 e^{-2 alpha (r - r0)} - e^{-alpha (r - r0)})
//   J(r) = d/4 (e^{-2 alpha (r - r0)} - 6 e^{-alpha (r - r0)})
//
// with w = (1+a, 1+b, 1+c) for the AB, BC and AC bonds. LEPS-II pins A and C
// at r_AC and couples B harmonically to a fourth atom D:
//
//   V2(r_AB, x) = V(r_AB, r_AC - r_AB) + 2 k_c (r_AB - (r_AC/2 - x/c_scale))^2

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "relax/error.hpp"
#include "relax/pes/potential.hpp"

namespace relax {

struct LepsParams {
    double a = 0.05;
    double b = 0.30;
    double c = 0.05;
    double d_ab = 4.746;
    double d_bc = 4.746;
    double d_ac = 3.445;
    double r0 = 0.742;
    double alpha = 1.942;
    // LEPS-II only
    double r_ac_fixed = 3.742;
    double k_c = 0.2025;
    double c_scale = 1.154;

    void validate() const {
        if (!(d_ab > 0 && d_bc > 0 && d_ac > 0)) throw InputError("LEPS well depths must be positive");
        if (!(alpha > 0)) throw InputError("LEPS alpha must be positive");
        if (!(1 + a > 0 && 1 + b > 0 && 1 + c > 0)) throw InputError("LEPS Sato weights must be positive");
    }
};

namespace leps_detail {

struct Bond {
    double q, dq, j, dj;  // already divided by the Sato weight
};

inline Bond bond(double r, double depth, double weight, const LepsParams& p) {
    const double e1 = std::exp(-p.alpha * (r - p.r0));
    const double e2 = e1 * e1;
    return {depth / 2.0 * (1.5 * e2 - e1) / weight,
            depth / 2.0 * (-3.0 * p.alpha * e2 + p.alpha * e1) / weight,
            depth / 4.0 * (e2 - 6.0 * e1) / weight,
            depth / 4.0 * (-2.0 * p.alpha * e2 + 6.0 * p.alpha * e1) / weight};
}

/// Energy and partial derivatives with respect to (r_AB, r_BC, r_AC).
inline double three_body(double r_ab, double r_bc, double r_ac, const LepsParams& p,
                         std::array<double, 3>& grad) {
    const Bond b1 = bond(r_ab, p.d_ab, 1.0 + p.a, p);
    const Bond b2 = bond(r_bc, p.d_bc, 1.0 + p.b, p);
    const Bond b3 = bond(r_ac, p.d_ac, 1.0 + p.c, p);
    const double disc = b1.j * b1.j + b2.j * b2.j + b3.j * b3.j - b1.j * b2.j - b2.j * b3.j -
                        b1.j * b3.j;
    // disc = ((j1-j2)^2 + (j2-j3)^2 + (j1-j3)^2) / 2 >= 0
    const double root = std::sqrt(std::max(disc, 0.0));
    const double inv = root > 0.0 ? 1.0 / (2.0 * root) : 0.0;
    grad[0] = b1.dq - inv * (2.0 * b1.j - b2.j - b3.j) * b1.dj;
    grad[1] = b2.dq - inv * (2.0 * b2.j - b1.j - b3.j) * b2.dj;
    grad[2] = b3.dq - inv * (2.0 * b3.j - b1.j - b2.j) * b3.dj;
    return b1.q + b2.q + b3.q - root;
}

}  // namespace leps_detail

/// LEPS-I on (r_AB, r_BC); r_AC = r_AB + r_BC.
class Leps1 final : public Potential {
public:
    explicit Leps1(LepsParams params = {}) : p_(params) { p_.validate(); }

    std::size_t dim() const override { return 2; }
    std::string name() const override { return "leps1"; }
    const LepsParams& params() const noexcept { return p_; }

protected:
    Evaluation compute(std::span<const double> r) const override {
        if (!(r[0] > 0.0 && r[1] > 0.0))
            throw DomainError("leps1: distances must be positive, got " + format_coords(r));
        std::array<double, 3> g{};
        const double u = leps_detail::three_body(r[0], r[1], r[0] + r[1], p_, g);
        return {u, {-(g[0] + g[2]), -(g[1] + g[2])}};
    }

private:
    LepsParams p_;
};

/// LEPS-II on (r_AB, x) with A and C fixed and B coupled to D.
class Leps2 final : public Potential {
public:
    explicit Leps2(LepsParams params = {}) : p_(params) {
        p_.validate();
        if (!(p_.r_ac_fixed > 0 && p_.k_c >= 0 && p_.c_scale > 0))
            throw InputError("LEPS-II coupling parameters out of range");
    }

    std::size_t dim() const override { return 2; }
    std::string name() const override { return "leps2"; }
    const LepsParams& params() const noexcept { return p_; }

    /// Coupling coordinate at which the harmonic term vanishes for a given r_AB.
    double relaxed_coupling(double r_ab) const { return p_.c_scale * (p_.r_ac_fixed / 2.0 - r_ab); }

protected:
    Evaluation compute(std::span<const double> r) const override {
        const double r_ab = r[0];
        const double r_bc = p_.r_ac_fixed - r_ab;
        if (!(r_ab > 0.0 && r_bc > 0.0))
            throw DomainError("leps2: r_AB must lie in (0, r_AC), got " + format_coords(r));
        std::array<double, 3> g{};
        const double u = leps_detail::three_body(r_ab, r_bc, p_.r_ac_fixed, p_, g);
        const double s = r_ab - (p_.r_ac_fixed / 2.0 - r[1] / p_.c_scale);
        const double spring = 2.0 * p_.k_c * s * s;
        const double ds = 4.0 * p_.k_c * s;
        return {u + spring, {-(g[0] - g[1] + ds), -(ds / p_.c_scale)}};
    }

private:
    LepsParams p_;
};

}  // namespace relax
