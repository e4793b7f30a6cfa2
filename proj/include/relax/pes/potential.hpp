#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <memory>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "relax/error.hpp"
#include "relax/vec.hpp"

namespace relax {

/// A point in coordinate space. Always non-empty and finite.
class Configuration {
public:
    Configuration() = default;
    explicit Configuration(Vector coords) : coords_(std::move(coords)) {
        if (coords_.empty()) throw InputError("configuration must have dim >= 1");
        if (!all_finite(coords_))
            throw NumericalError("configuration has non-finite coordinates", coords_);
    }
    Configuration(std::initializer_list<double> coords) : Configuration(Vector(coords)) {}

    std::size_t dim() const noexcept { return coords_.size(); }
    const Vector& coords() const noexcept { return coords_; }
    double operator[](std::size_t i) const { return coords_[i]; }
    operator std::span<const double>() const noexcept { return coords_; }

    friend bool operator==(const Configuration&, const Configuration&) = default;

private:
    Vector coords_;
};

struct Evaluation {
    double energy = 0.0;
    Vector force;  // -grad U
};

inline std::string format_coords(std::span<const double> r) {
    std::ostringstream os;
    os.precision(17);
    os << '(';
    for (std::size_t i = 0; i < r.size(); ++i) os << (i ? ", " : "") << r[i];
    os << ')';
    return os.str();
}

/// An energy surface. Implementations override compute(); evaluate() adds the
/// dimension and finiteness checks every caller relies on.
class Potential {
public:
    virtual ~Potential() = default;

    virtual std::size_t dim() const = 0;
    virtual std::string name() const = 0;

    Evaluation evaluate(std::span<const double> r) const {
        check_input(r);
        Evaluation e = compute(r);
        if (e.force.size() != r.size())
            throw NumericalError(name() + ": force has wrong length", Vector(r.begin(), r.end()));
        if (!std::isfinite(e.energy) || !all_finite(e.force))
            throw NumericalError(name() + ": non-finite result at " + format_coords(r),
                                 Vector(r.begin(), r.end()));
        return e;
    }

    /// Energy only. Never counted as a force evaluation.
    double energy(std::span<const double> r) const {
        check_input(r);
        double u = compute_energy(r);
        if (!std::isfinite(u))
            throw NumericalError(name() + ": non-finite energy at " + format_coords(r),
                                 Vector(r.begin(), r.end()));
        return u;
    }

protected:
    virtual Evaluation compute(std::span<const double> r) const = 0;
    virtual double compute_energy(std::span<const double> r) const { return compute(r).energy; }

private:
    void check_input(std::span<const double> r) const {
        if (r.size() != dim())
            throw InputError(name() + ": expected dim " + std::to_string(dim()) + ", got " +
                             std::to_string(r.size()));
        if (!all_finite(r))
            throw NumericalError(name() + ": non-finite coordinates " + format_coords(r),
                                 Vector(r.begin(), r.end()));
    }
};

using PotentialPtr = std::shared_ptr<const Potential>;

/// Non-owning handle; the referenced potential must outlive every copy.
inline PotentialPtr borrow(const Potential& p) { return PotentialPtr(PotentialPtr{}, &p); }

/// Counts calls to evaluate(). energy() passes through uncounted.
class CountingPotential final : public Potential {
public:
    explicit CountingPotential(PotentialPtr inner) : inner_(std::move(inner)) {
        if (!inner_) throw InputError("CountingPotential: null inner potential");
    }
    explicit CountingPotential(const Potential& inner) : CountingPotential(borrow(inner)) {}

    std::size_t dim() const override { return inner_->dim(); }
    std::string name() const override { return inner_->name(); }
    std::uint64_t count() const noexcept { return n_evals_.load(std::memory_order_relaxed); }
    const Potential& inner() const noexcept { return *inner_; }

protected:
    Evaluation compute(std::span<const double> r) const override {
        n_evals_.fetch_add(1, std::memory_order_relaxed);
        return inner_->evaluate(r);
    }
    double compute_energy(std::span<const double> r) const override { return inner_->energy(r); }

private:
    PotentialPtr inner_;
    mutable std::atomic<std::uint64_t> n_evals_{0};
};

/// Holds selected coordinates of an inner potential fixed and exposes the rest.
class PinnedPotential final : public Potential {
public:
    /// `template_point` supplies values for the pinned coordinates; `free` lists
    /// the indices that remain variable, in order.
    PinnedPotential(PotentialPtr inner, Vector template_point, std::vector<std::size_t> free)
        : inner_(std::move(inner)), point_(std::move(template_point)), free_(std::move(free)) {
        if (point_.size() != inner_->dim()) throw InputError("PinnedPotential: template dim mismatch");
        for (auto i : free_)
            if (i >= point_.size()) throw InputError("PinnedPotential: free index out of range");
        if (free_.empty()) throw InputError("PinnedPotential: nothing left free");
    }

    std::size_t dim() const override { return free_.size(); }
    std::string name() const override { return inner_->name() + "[pinned]"; }

    Vector expand(std::span<const double> r) const {
        Vector full = point_;
        for (std::size_t k = 0; k < free_.size(); ++k) full[free_[k]] = r[k];
        return full;
    }

protected:
    Evaluation compute(std::span<const double> r) const override {
        Evaluation full = inner_->evaluate(expand(r));
        Evaluation out{full.energy, Vector(free_.size())};
        for (std::size_t k = 0; k < free_.size(); ++k) out.force[k] = full.force[free_[k]];
        return out;
    }
    double compute_energy(std::span<const double> r) const override {
        return inner_->energy(expand(r));
    }

private:
    PotentialPtr inner_;
    Vector point_;
    std::vector<std::size_t> free_;
};

}  // namespace relax
