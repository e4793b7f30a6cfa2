#pragma once

// Nudged elastic band with improved tangents. The interior images are
// flattened into one composite vector so any optimizer can relax the band.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "relax/error.hpp"
#include "relax/opt/optimizer.hpp"
#include "relax/pes/potential.hpp"

namespace relax {

struct Band {
    std::vector<Vector> images;  // endpoints included
    double k_spring = 1.0;

    std::size_t size() const noexcept { return images.size(); }
    std::size_t dim() const noexcept { return images.empty() ? 0 : images.front().size(); }
    std::size_t n_interior() const noexcept { return images.size() < 2 ? 0 : images.size() - 2; }

    void validate() const {
        if (images.size() < 3) throw InputError("band needs at least 3 images");
        if (!(k_spring >= 0.0) || !std::isfinite(k_spring)) throw InputError("k_spring must be finite and >= 0");
        for (const auto& im : images) {
            if (im.size() != dim() || im.empty()) throw InputError("band images must share one non-zero dimension");
            if (!all_finite(im)) throw NumericalError("band image has non-finite coordinates", im);
        }
    }

    Vector flatten_interior() const {
        Vector out;
        out.reserve(n_interior() * dim());
        for (std::size_t i = 1; i + 1 < images.size(); ++i) out.insert(out.end(), images[i].begin(), images[i].end());
        return out;
    }

    /// Copy with the interior images replaced by the composite vector x.
    Band with_interior(std::span<const double> x) const {
        if (x.size() != n_interior() * dim()) throw InputError("composite vector has wrong length");
        Band out = *this;
        for (std::size_t i = 1; i + 1 < images.size(); ++i) {
            auto chunk = x.subspan((i - 1) * dim(), dim());
            out.images[i].assign(chunk.begin(), chunk.end());
        }
        return out;
    }
};

/// r_start + (i/(M-1))·(r_end - r_start), i = 0..M-1.
inline Band interpolate_band(std::span<const double> r_start, std::span<const double> r_end, std::size_t n_images,
                             double k_spring = 1.0) {
    if (n_images < 3) throw InputError("interpolate_band: n_images must be >= 3");
    if (r_start.size() != r_end.size() || r_start.empty())
        throw InputError("interpolate_band: endpoints must share one non-zero dimension");
    Band b;
    b.k_spring = k_spring;
    const double last = static_cast<double>(n_images - 1);
    for (std::size_t i = 0; i < n_images; ++i) {
        Vector im(r_start.size());
        for (std::size_t j = 0; j < im.size(); ++j)
            im[j] = i + 1 == n_images ? r_end[j] : r_start[j] + (static_cast<double>(i) / last) * (r_end[j] - r_start[j]);
        b.images.push_back(std::move(im));
    }
    b.validate();
    return b;
}

/// Unit tangent at interior image i: the uphill segment, or at an energy
/// extremum the two segments weighted by the larger and smaller energy step.
inline Vector improved_tangent(const std::vector<Vector>& images, std::span<const double> energies, std::size_t i) {
    if (i == 0 || i + 1 >= images.size()) throw InputError("improved_tangent: index must be interior");
    if (energies.size() != images.size()) throw InputError("improved_tangent: one energy per image required");
    const Vector tp = sub(images[i + 1], images[i]);
    const Vector tm = sub(images[i], images[i - 1]);
    const double ep = energies[i + 1], e0 = energies[i], em = energies[i - 1];
    Vector tau;
    if (ep > e0 && e0 > em) {
        tau = tp;
    } else if (ep < e0 && e0 < em) {
        tau = tm;
    } else {
        const double a = std::abs(ep - e0), b = std::abs(em - e0);
        const double dmax = std::max(a, b), dmin = std::min(a, b);
        if (dmax == 0.0) {
            tau = add(tp, tm);
        } else if (ep > em) {
            tau = add(scaled(tp, dmax), scaled(tm, dmin));
        } else {
            tau = add(scaled(tp, dmin), scaled(tm, dmax));
        }
    }
    const double n = norm(tau);
    if (n == 0.0 || !std::isfinite(n)) throw DegenerateError("improved_tangent: zero-length tangent at image " + std::to_string(i));
    return scaled(tau, 1.0 / n);
}

struct BandForces {
    std::vector<Vector> forces;         // interior images, NEB force
    std::vector<Vector> perpendicular;  // interior images, true force minus its tangential part
    std::vector<Vector> tangents;       // interior images, unit length
    std::vector<double> energies;       // all images

    Vector stacked() const {
        Vector out;
        for (const auto& f : forces) out.insert(out.end(), f.begin(), f.end());
        return out;
    }
    double max_perpendicular_norm() const {
        double m = 0.0;
        for (const auto& f : perpendicular) m = std::max(m, norm(f));
        return m;
    }
};

/// NEB forces given true evaluations of the interior images and the endpoint energies.
inline BandForces assemble_neb_forces(const Band& band, std::span<const Evaluation> interior, double e_start,
                                      double e_end) {
    const std::size_t m = band.size();
    if (interior.size() != band.n_interior()) throw InputError("assemble_neb_forces: one evaluation per interior image");
    BandForces out;
    out.energies.resize(m);
    out.energies.front() = e_start;
    out.energies.back() = e_end;
    for (std::size_t i = 1; i + 1 < m; ++i) out.energies[i] = interior[i - 1].energy;
    for (std::size_t i = 1; i + 1 < m; ++i) {
        const Vector tau = improved_tangent(band.images, out.energies, i);
        const Vector& f = interior[i - 1].force;
        Vector perp = axpy(f, -dot(f, tau), tau);
        const double stretch = norm(sub(band.images[i + 1], band.images[i])) - norm(sub(band.images[i], band.images[i - 1]));
        out.forces.push_back(axpy(perp, band.k_spring * stretch, tau));
        out.perpendicular.push_back(std::move(perp));
        out.tangents.push_back(tau);
    }
    return out;
}

/// Evaluates every interior image once and assembles the NEB forces.
inline BandForces neb_forces(const Potential& p, const Band& band, double e_start, double e_end) {
    band.validate();
    std::vector<Evaluation> interior;
    for (std::size_t i = 1; i + 1 < band.size(); ++i) interior.push_back(p.evaluate(band.images[i]));
    return assemble_neb_forces(band, interior, e_start, e_end);
}

/// The band as a pseudo-potential over its interior images. Its force is the
/// stacked NEB force; its energy is the sum of interior image energies and is
/// only meaningful for logging. Endpoint energies are evaluated once, at construction.
class BandPotential final : public Potential {
public:
    BandPotential(const Potential& pes, Band band) : counter_(pes), band_(std::move(band)) {
        band_.validate();
        if (band_.dim() != pes.dim()) throw InputError("band dimension does not match the potential");
        e_start_ = counter_.evaluate(band_.images.front()).energy;
        e_end_ = counter_.evaluate(band_.images.back()).energy;
    }

    std::size_t dim() const override { return band_.n_interior() * band_.dim(); }
    std::string name() const override { return "band[" + counter_.name() + "]"; }

    const Band& band() const noexcept { return band_; }
    double start_energy() const noexcept { return e_start_; }
    double end_energy() const noexcept { return e_end_; }
    /// Image evaluations so far, endpoints included.
    std::uint64_t image_evals() const noexcept { return counter_.count(); }
    /// Forces from the most recent assembly.
    const BandForces& last_forces() const noexcept { return last_; }

protected:
    Evaluation compute(std::span<const double> x) const override {
        const Band b = band_.with_interior(x);
        last_ = neb_forces(counter_, b, e_start_, e_end_);
        double e = 0.0;
        for (std::size_t i = 1; i + 1 < b.size(); ++i) e += last_.energies[i];
        return {e, last_.stacked()};
    }

    double compute_energy(std::span<const double> x) const override {
        const Band b = band_.with_interior(x);
        double e = 0.0;
        for (std::size_t i = 1; i + 1 < b.size(); ++i) e += counter_.energy(b.images[i]);
        return e;
    }

private:
    CountingPotential counter_;
    Band band_;
    double e_start_ = 0.0;
    double e_end_ = 0.0;
    mutable BandForces last_;
};

struct BandSnapshot {
    std::uint64_t n_evals = 0;  // image evaluations
    std::vector<Vector> images;
};

struct NebResult {
    RunReport report;  // counts in image evaluations
    Band band;
    BandForces forces;
    std::vector<BandSnapshot> snapshots;
    std::uint64_t assemblies = 0;
};

/// Relaxes the band's interior images with the chosen optimizer. The stopping
/// rule applies to the stacked NEB force; max_evals counts image evaluations.
inline NebResult optimize_band(const Potential& pes, const Band& band, OptimizerKind kind,
                               OptimizerSettings settings = {}) {
    if (kind == OptimizerKind::ref_sd || kind == OptimizerKind::ref_cg)
        throw InputError("optimize_band: line-search reference methods need a conservative objective");
    band.validate();
    BandPotential bp(pes, band);
    const std::uint64_t per = band.n_interior();
    const std::uint64_t image_budget = settings.stop.max_evals;
    settings.stop.max_evals = image_budget > 2 ? std::max<std::uint64_t>(1, (image_budget - 2) / per) : 1;

    NebResult out;
    out.report = run_optimizer(kind, bp, band.flatten_interior(), settings);
    RunReport& rep = out.report;
    out.assemblies = rep.n_force_evals;
    auto rescale = [&](std::uint64_t n) { return 2 + n * per; };
    rep.n_force_evals = bp.image_evals();
    for (auto& s : rep.norm_history) s.n_evals = rescale(s.n_evals);
    for (auto& e : rep.events) e.n_evals = rescale(e.n_evals);
    for (auto& tp : rep.trajectory) {
        tp.n_evals = rescale(tp.n_evals);
        out.snapshots.push_back({tp.n_evals, band.with_interior(tp.position).images});
    }
    out.band = rep.final_r.empty() ? band : band.with_interior(rep.final_r);
    // The tracker's final point is the last successful assembly.
    if (!rep.final_r.empty()) out.forces = bp.last_forces();
    return out;
}

}  // namespace relax
