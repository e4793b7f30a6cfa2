#pragma once

// Analytic unconstrained-minimization test functions. Forms follow the
// classical definitions (Himmelblau, Goldstein-Price, Rosenbrock, Booth) and
// Andrei's collection for the rest; "extended" forms act on consecutive
// coordinate pairs. Gradients are closed form.

#include <algorithm>
#include <cmath>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "relax/error.hpp"
#include "relax/pes/potential.hpp"

namespace relax {

namespace catalog_detail {

using Span = std::span<const double>;
using Out = std::span<double>;

// ---- classical 2D ----------------------------------------------------------

inline double himmelblau(Span x, Out g) {
    double f = 0.0;
    for (std::size_t i = 0; i + 1 < x.size(); i += 2) {
        const double a = x[i] * x[i] + x[i + 1] - 11.0;
        const double b = x[i] + x[i + 1] * x[i + 1] - 7.0;
        f += a * a + b * b;
        g[i] = 4.0 * x[i] * a + 2.0 * b;
        g[i + 1] = 2.0 * a + 4.0 * x[i + 1] * b;
    }
    return f;
}

inline double goldstein_price(Span x, Out g) {
    const double u = x[0], w = x[1];
    const double s = u + w + 1.0;
    const double p = 19.0 - 14.0 * u + 3.0 * u * u - 14.0 * w + 6.0 * u * w + 3.0 * w * w;
    const double dp = -14.0 + 6.0 * u + 6.0 * w;  // same for u and w
    const double a = 1.0 + s * s * p;
    const double t = 2.0 * u - 3.0 * w;
    const double q = 18.0 - 32.0 * u + 12.0 * u * u + 48.0 * w - 36.0 * u * w + 27.0 * w * w;
    const double b = 30.0 + t * t * q;
    const double da = 2.0 * s * p + s * s * dp;
    const double db_du = 4.0 * t * q + t * t * (-32.0 + 24.0 * u - 36.0 * w);
    const double db_dw = -6.0 * t * q + t * t * (48.0 - 36.0 * u + 54.0 * w);
    g[0] = da * b + a * db_du;
    g[1] = da * b + a * db_dw;
    return a * b;
}

inline double rosenbrock(Span x, Out g) {
    const double a = x[1] - x[0] * x[0];
    const double b = 1.0 - x[0];
    g[0] = -400.0 * x[0] * a - 2.0 * b;
    g[1] = 200.0 * a;
    return 100.0 * a * a + b * b;
}

inline double booth(Span x, Out g) {
    const double a = x[0] + 2.0 * x[1] - 7.0;
    const double b = 2.0 * x[0] + x[1] - 5.0;
    g[0] = 2.0 * a + 4.0 * b;
    g[1] = 4.0 * a + 2.0 * b;
    return a * a + b * b;
}

// ---- Andrei collection -----------------------------------------------------

inline double extended_beale(Span x, Out g) {
    double f = 0.0;
    for (std::size_t i = 0; i + 1 < x.size(); i += 2) {
        const double u = x[i], w = x[i + 1];
        const double c1 = 1.0 - w, c2 = 1.0 - w * w, c3 = 1.0 - w * w * w;
        const double t1 = 1.5 - u * c1, t2 = 2.25 - u * c2, t3 = 2.625 - u * c3;
        f += t1 * t1 + t2 * t2 + t3 * t3;
        g[i] = -2.0 * (t1 * c1 + t2 * c2 + t3 * c3);
        g[i + 1] = 2.0 * (t1 * u + t2 * 2.0 * u * w + t3 * 3.0 * u * w * w);
    }
    return f;
}

inline double hager(Span x, Out g) {
    double f = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double s = std::sqrt(double(i + 1));
        f += std::exp(x[i]) - s * x[i];
        g[i] = std::exp(x[i]) - s;
    }
    return f;
}

inline double raydan1(Span x, Out g) {
    double f = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double c = double(i + 1) / 10.0;
        f += c * (std::exp(x[i]) - x[i]);
        g[i] = c * (std::exp(x[i]) - 1.0);
    }
    return f;
}

inline double extended_penalty(Span x, Out g) {
    const std::size_t n = x.size();
    double sq = 0.0;
    for (double v : x) sq += v * v;
    const double r = sq - 0.25;
    double f = r * r;
    for (std::size_t i = 0; i < n; ++i) {
        g[i] = 4.0 * x[i] * r;
        if (i + 1 < n) {
            f += (x[i] - 1.0) * (x[i] - 1.0);
            g[i] += 2.0 * (x[i] - 1.0);
        }
    }
    return f;
}

inline double diagonal1(Span x, Out g) {
    double f = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        f += std::exp(x[i]) - double(i + 1) * x[i];
        g[i] = std::exp(x[i]) - double(i + 1);
    }
    return f;
}

inline double diagonal2(Span x, Out g) {
    double f = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        f += std::exp(x[i]) - x[i] / double(i + 1);
        g[i] = std::exp(x[i]) - 1.0 / double(i + 1);
    }
    return f;
}

inline double diagonal3(Span x, Out g) {
    double f = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        f += std::exp(x[i]) - double(i + 1) * std::sin(x[i]);
        g[i] = std::exp(x[i]) - double(i + 1) * std::cos(x[i]);
    }
    return f;
}

inline double tridiagonal1(Span x, Out g) {
    double f = 0.0;
    for (std::size_t i = 0; i + 1 < x.size(); i += 2) {
        const double a = x[i] + x[i + 1] - 3.0;
        const double b = x[i] - x[i + 1] + 1.0;
        f += a * a + b * b * b * b;
        g[i] = 2.0 * a + 4.0 * b * b * b;
        g[i + 1] = 2.0 * a - 4.0 * b * b * b;
    }
    return f;
}

inline double extended_tet(Span x, Out g) {
    double f = 0.0;
    for (std::size_t i = 0; i + 1 < x.size(); i += 2) {
        const double e1 = std::exp(x[i] + 3.0 * x[i + 1] - 0.1);
        const double e2 = std::exp(x[i] - 3.0 * x[i + 1] - 0.1);
        const double e3 = std::exp(-x[i] - 0.1);
        f += e1 + e2 + e3;
        g[i] = e1 + e2 - e3;
        g[i + 1] = 3.0 * (e1 - e2);
    }
    return f;
}

inline double generalized_psc1(Span x, Out g) {
    std::fill(g.begin(), g.end(), 0.0);
    double f = 0.0;
    for (std::size_t i = 0; i + 1 < x.size(); ++i) {
        const double a = x[i], b = x[i + 1];
        const double s = a * a + b * b + a * b;
        f += s * s + std::sin(a) * std::sin(a) + std::cos(b) * std::cos(b);
        g[i] += 2.0 * s * (2.0 * a + b) + 2.0 * std::sin(a) * std::cos(a);
        g[i + 1] += 2.0 * s * (2.0 * b + a) - 2.0 * std::cos(b) * std::sin(b);
    }
    return f;
}

inline double full_hessian_fh2(Span x, Out g) {
    const std::size_t n = x.size();
    double f = (x[0] - 5.0) * (x[0] - 5.0);
    // residuals r_i = (x_1 + ... + x_i) - 1 for i >= 2
    std::vector<double> tail(n + 1, 0.0);  // tail[j] = sum_{i >= max(j,1)} 2 r_i
    double partial = x[0];
    std::vector<double> r(n, 0.0);
    for (std::size_t i = 1; i < n; ++i) {
        partial += x[i];
        r[i] = partial - 1.0;
        f += r[i] * r[i];
    }
    for (std::size_t i = n; i-- > 1;) tail[i] = tail[i + 1] + 2.0 * r[i];
    g[0] = 2.0 * (x[0] - 5.0) + (n > 1 ? tail[1] : 0.0);
    for (std::size_t j = 1; j < n; ++j) g[j] = tail[j];
    return f;
}

inline double extended_bd1(Span x, Out g) {
    double f = 0.0;
    for (std::size_t i = 0; i + 1 < x.size(); i += 2) {
        const double u = x[i], w = x[i + 1];
        const double a = u * u + w * w - 2.0;
        const double e = std::exp(u - 1.0);
        const double b = e - w;
        f += a * a + b * b;
        g[i] = 4.0 * u * a + 2.0 * b * e;
        g[i + 1] = 4.0 * w * a - 2.0 * b;
    }
    return f;
}

inline double extended_maratos(Span x, Out g) {
    constexpr double c = 100.0;
    double f = 0.0;
    for (std::size_t i = 0; i + 1 < x.size(); i += 2) {
        const double q = x[i] * x[i] + x[i + 1] * x[i + 1] - 1.0;
        f += x[i] + c * q * q;
        g[i] = 1.0 + 4.0 * c * x[i] * q;
        g[i + 1] = 4.0 * c * x[i + 1] * q;
    }
    return f;
}

inline double quadratic_qf1(Span x, Out g) {
    const std::size_t n = x.size();
    double f = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        f += 0.5 * double(i + 1) * x[i] * x[i];
        g[i] = double(i + 1) * x[i];
    }
    f -= x[n - 1];
    g[n - 1] -= 1.0;
    return f;
}

inline double perturbed_quadratic(Span x, Out g) {
    double f = 0.0, s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        f += double(i + 1) * x[i] * x[i];
        s += x[i];
    }
    f += s * s / 100.0;
    for (std::size_t i = 0; i < x.size(); ++i) g[i] = 2.0 * double(i + 1) * x[i] + 2.0 * s / 100.0;
    return f;
}

// FLETCHCR
inline double fletcher(Span x, Out g) {
    constexpr double c = 100.0;
    std::fill(g.begin(), g.end(), 0.0);
    double f = 0.0;
    for (std::size_t i = 0; i + 1 < x.size(); ++i) {
        const double t = x[i + 1] - x[i] + 1.0 - x[i] * x[i];
        f += c * t * t;
        g[i] += 2.0 * c * t * (-1.0 - 2.0 * x[i]);
        g[i + 1] += 2.0 * c * t;
    }
    return f;
}

inline double tridia(Span x, Out g) {
    std::fill(g.begin(), g.end(), 0.0);
    double f = (x[0] - 1.0) * (x[0] - 1.0);
    g[0] = 2.0 * (x[0] - 1.0);
    for (std::size_t i = 1; i < x.size(); ++i) {
        const double w = double(i + 1);
        const double t = 2.0 * x[i] - x[i - 1];
        f += w * t * t;
        g[i] += 4.0 * w * t;
        g[i - 1] -= 2.0 * w * t;
    }
    return f;
}

inline double arwhead(Span x, Out g) {
    const std::size_t n = x.size();
    std::fill(g.begin(), g.end(), 0.0);
    double f = 0.0;
    const double xn = x[n - 1];
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double q = x[i] * x[i] + xn * xn;
        f += -4.0 * x[i] + 3.0 + q * q;
        g[i] += -4.0 + 4.0 * x[i] * q;
        g[n - 1] += 4.0 * xn * q;
    }
    return f;
}

inline double eg2(Span x, Out g) {
    const std::size_t n = x.size();
    std::fill(g.begin(), g.end(), 0.0);
    double f = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double u = x[0] + x[i] * x[i] - 1.0;
        const double c = std::cos(u);
        f += std::sin(u);
        g[0] += c;
        g[i] += 2.0 * x[i] * c;
    }
    const double xn = x[n - 1];
    f += 0.5 * std::sin(xn * xn);
    g[n - 1] += xn * std::cos(xn * xn);
    return f;
}

inline double liarwhd(Span x, Out g) {
    std::fill(g.begin(), g.end(), 0.0);
    double f = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double a = x[i] * x[i] - x[0];
        f += 4.0 * a * a + (x[i] - 1.0) * (x[i] - 1.0);
        g[i] += 16.0 * x[i] * a + 2.0 * (x[i] - 1.0);
        g[0] -= 8.0 * a;
    }
    return f;
}

inline double power(Span x, Out g) {
    double f = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double w = double(i + 1);
        f += w * w * x[i] * x[i];
        g[i] = 2.0 * w * w * x[i];
    }
    return f;
}

inline double engval1(Span x, Out g) {
    std::fill(g.begin(), g.end(), 0.0);
    double f = 0.0;
    for (std::size_t i = 0; i + 1 < x.size(); ++i) {
        const double q = x[i] * x[i] + x[i + 1] * x[i + 1];
        f += q * q - 4.0 * x[i] + 3.0;
        g[i] += 4.0 * x[i] * q - 4.0;
        g[i + 1] += 4.0 * x[i + 1] * q;
    }
    return f;
}

inline double extended_trigonometric(Span x, Out g) {
    const std::size_t n = x.size();
    double cos_sum = 0.0, f = 0.0;
    for (double v : x) cos_sum += std::cos(v);
    std::vector<double> r(n);
    double r_sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double w = double(i + 1);
        r[i] = double(n) - cos_sum + w * (1.0 - std::cos(x[i])) - std::sin(x[i]);
        f += r[i] * r[i];
        r_sum += r[i];
    }
    for (std::size_t j = 0; j < n; ++j) {
        const double w = double(j + 1);
        g[j] = 2.0 * r_sum * std::sin(x[j]) + 2.0 * r[j] * (w * std::sin(x[j]) - std::cos(x[j]));
    }
    return f;
}

using Fn = double (*)(Span, Out);

enum class DimRule { exactly_two, even, any };

struct Entry {
    std::string_view name;
    Fn fn;
    DimRule rule;
};

inline constexpr Entry entries[] = {
    {"himmelblau", himmelblau, DimRule::even},
    {"goldstein_price", goldstein_price, DimRule::exactly_two},
    {"extended_beale", extended_beale, DimRule::even},
    {"rosenbrock", rosenbrock, DimRule::exactly_two},
    {"hager", hager, DimRule::any},
    {"booth", booth, DimRule::exactly_two},
    {"raydan1", raydan1, DimRule::any},
    {"extended_penalty", extended_penalty, DimRule::any},
    {"diagonal1", diagonal1, DimRule::any},
    {"diagonal2", diagonal2, DimRule::any},
    {"diagonal3", diagonal3, DimRule::any},
    {"tridiagonal1", tridiagonal1, DimRule::even},
    {"extended_tet", extended_tet, DimRule::even},
    {"generalized_psc1", generalized_psc1, DimRule::any},
    {"full_hessian_fh2", full_hessian_fh2, DimRule::any},
    {"extended_bd1", extended_bd1, DimRule::even},
    {"extended_maratos", extended_maratos, DimRule::even},
    {"quadratic_qf1", quadratic_qf1, DimRule::any},
    {"perturbed_quadratic", perturbed_quadratic, DimRule::any},
    {"fletcher", fletcher, DimRule::any},
    {"tridia", tridia, DimRule::any},
    {"arwhead", arwhead, DimRule::any},
    {"eg2", eg2, DimRule::any},
    {"liarwhd", liarwhd, DimRule::any},
    {"power", power, DimRule::any},
    {"engval1", engval1, DimRule::any},
    {"extended_trigonometric", extended_trigonometric, DimRule::any},
};

inline bool dim_ok(DimRule rule, std::size_t dim) {
    switch (rule) {
        case DimRule::exactly_two: return dim == 2;
        case DimRule::even: return dim >= 2 && dim % 2 == 0;
        case DimRule::any: return dim >= 2;
    }
    return false;
}

}  // namespace catalog_detail

/// Closed-form test function from the catalog.
class AnalyticFunction final : public Potential {
public:
    AnalyticFunction(std::string name, std::size_t dim, catalog_detail::Fn fn)
        : name_(std::move(name)), dim_(dim), fn_(fn) {}

    std::size_t dim() const override { return dim_; }
    std::string name() const override { return name_; }

protected:
    Evaluation compute(std::span<const double> r) const override {
        Vector grad(dim_, 0.0);
        const double u = fn_(r, grad);
        for (double& g : grad) g = -g;
        return {u, std::move(grad)};
    }

private:
    std::string name_;
    std::size_t dim_;
    catalog_detail::Fn fn_;
};

inline std::vector<std::string> catalog_names() {
    std::vector<std::string> out;
    for (const auto& e : catalog_detail::entries) out.emplace_back(e.name);
    return out;
}

/// Looks up a test function by identifier, e.g. ("himmelblau", 2).
inline std::shared_ptr<const AnalyticFunction> catalog_lookup(std::string_view name, std::size_t dim) {
    for (const auto& e : catalog_detail::entries) {
        if (e.name != name) continue;
        if (!catalog_detail::dim_ok(e.rule, dim))
            throw InputError(std::string(name) + " is not defined for dim " + std::to_string(dim));
        return std::make_shared<AnalyticFunction>(std::string(name), dim, e.fn);
    }
    std::string msg = "unknown function '" + std::string(name) + "'; available:";
    for (const auto& n : catalog_names()) msg += " " + n;
    throw LookupError(msg, catalog_names());
}

}  // namespace relax
