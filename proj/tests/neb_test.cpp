#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "relax/bench/suites.hpp"
#include "relax/neb/band.hpp"
#include "relax/neb/endpoints.hpp"
#include "relax/pes/leps.hpp"
#include "test_support.hpp"

using namespace relax;

namespace {

/// U = y^2: flat along x.
class Trough final : public Potential {
public:
    std::size_t dim() const override { return 2; }
    std::string name() const override { return "trough"; }

protected:
    Evaluation compute(std::span<const double> r) const override { return {r[1] * r[1], {0.0, -2.0 * r[1]}}; }
};

/// Improved tangent transcribed case by case from the expected rule, kept
/// separate from the library version on purpose.
Vector transcribed_tangent(const Vector& rm, const Vector& r0, const Vector& rp, double vm, double v0, double vp) {
    Vector tp(r0.size()), tm(r0.size()), t(r0.size());
    for (std::size_t k = 0; k < r0.size(); ++k) tp[k] = rp[k] - r0[k], tm[k] = r0[k] - rm[k];
    if (vp > v0 && v0 > vm) {
        t = tp;
    } else if (vp < v0 && v0 < vm) {
        t = tm;
    } else {
        const double dvmax = std::max(std::fabs(vp - v0), std::fabs(vm - v0));
        const double dvmin = std::min(std::fabs(vp - v0), std::fabs(vm - v0));
        for (std::size_t k = 0; k < r0.size(); ++k)
            t[k] = vp > vm ? tp[k] * dvmax + tm[k] * dvmin : tp[k] * dvmin + tm[k] * dvmax;
    }
    double n = 0;
    for (double x : t) n += x * x;
    n = std::sqrt(n);
    for (double& x : t) x /= n;
    return t;
}

}  // namespace

TEST(InterpolateBand, Midpoint) {
    auto b = interpolate_band(Vector{0, 0}, Vector{1, 1}, 3);
    ASSERT_EQ(b.size(), 3u);
    EXPECT_EQ(b.images[1], (Vector{0.5, 0.5}));
}

TEST(InterpolateBand, UniformSpacingBetweenLepsEndpoints) {
    Leps1 p;
    auto [a, e] = leps1_endpoints(p);
    auto b = interpolate_band(a, e, 12);
    EXPECT_EQ(b.n_interior(), 10u);
    EXPECT_EQ(b.images.front(), a);
    EXPECT_EQ(b.images.back(), e);
    const double seg = norm(sub(e, a)) / 11.0;
    for (std::size_t i = 1; i < b.size(); ++i) EXPECT_NEAR(norm(sub(b.images[i], b.images[i - 1])), seg, 1e-12);
}

TEST(InterpolateBand, EqualEndpointsGiveIdenticalImages) {
    auto b = interpolate_band(Vector{1, 2}, Vector{1, 2}, 5);
    for (const auto& im : b.images) EXPECT_EQ(im, (Vector{1, 2}));
}

TEST(InterpolateBand, Preconditions) {
    EXPECT_THROW(interpolate_band(Vector{0, 0}, Vector{1, 1}, 2), InputError);
    EXPECT_THROW(interpolate_band(Vector{0, 0}, Vector{1, 1, 1}, 4), InputError);
}

TEST(ImprovedTangent, MonotoneIncreasingTakesUpperSegment) {
    std::vector<Vector> im{{0, 0}, {1, 0}, {3, 1}};
    const Vector e{0.0, 1.0, 2.0};
    auto t = improved_tangent(im, e, 1);
    const double n = std::sqrt(5.0);
    EXPECT_DOUBLE_EQ(t[0], 2.0 / n);
    EXPECT_DOUBLE_EQ(t[1], 1.0 / n);
}

TEST(ImprovedTangent, MonotoneDecreasingTakesLowerSegment) {
    std::vector<Vector> im{{0, 0}, {1, 0}, {3, 1}};
    auto t = improved_tangent(im, Vector{2.0, 1.0, 0.0}, 1);
    EXPECT_DOUBLE_EQ(t[0], 1.0);
    EXPECT_DOUBLE_EQ(t[1], 0.0);
}

TEST(ImprovedTangent, SymmetricPeakOnCollinearBand) {
    std::vector<Vector> im{{0, 0}, {1, 1}, {3, 3}};
    auto t = improved_tangent(im, Vector{0.0, 1.0, 0.0}, 1);
    EXPECT_NEAR(t[0], 1.0 / std::sqrt(2.0), 1e-15);
    EXPECT_NEAR(t[1], 1.0 / std::sqrt(2.0), 1e-15);
}

TEST(ImprovedTangent, FlatEnergiesUseEqualWeights) {
    std::vector<Vector> im{{0, 0}, {1, 0}, {1, 1}};
    auto t = improved_tangent(im, Vector{0.0, 0.0, 0.0}, 1);
    EXPECT_NEAR(t[0], 1.0 / std::sqrt(2.0), 1e-15);
    EXPECT_NEAR(t[1], 1.0 / std::sqrt(2.0), 1e-15);
}

TEST(ImprovedTangent, CoincidentNeighborsAreDegenerate) {
    std::vector<Vector> im{{1, 1}, {1, 1}, {1, 1}};
    EXPECT_THROW(improved_tangent(im, Vector{0.0, 1.0, 2.0}, 1), DegenerateError);
    EXPECT_THROW(improved_tangent(im, Vector{0.0, 1.0, 2.0}, 0), InputError);
}

TEST(ImprovedTangent, MatchesTranscriptionOnRandomBands) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 500; ++trial) {
        std::vector<Vector> im(3, Vector(2));
        Vector e(3);
        for (auto& r : im) r = {u(rng), u(rng)};
        for (double& x : e) x = u(rng);
        const auto got = improved_tangent(im, e, 1);
        const auto want = transcribed_tangent(im[0], im[1], im[2], e[0], e[1], e[2]);
        EXPECT_NEAR(got[0], want[0], 1e-12);
        EXPECT_NEAR(got[1], want[1], 1e-12);
    }
}

TEST(NebForces, StraightUniformBandOnFlatValleyIsForceFree) {
    Trough t;
    auto b = interpolate_band(Vector{0, 0}, Vector{4, 0}, 5);
    auto f = neb_forces(t, b, 0.0, 0.0);
    for (const auto& v : f.forces) EXPECT_EQ(norm(v), 0.0);
}

TEST(NebForces, NonUniformSpacingGivesTangentialSpringForce) {
    Trough t;
    Band b;
    b.k_spring = 2.0;
    b.images = {{0, 0}, {1, 0}, {4, 0}};
    auto f = neb_forces(t, b, 0.0, 0.0);
    ASSERT_EQ(f.forces.size(), 1u);
    EXPECT_DOUBLE_EQ(f.forces[0][0], 2.0 * (3.0 - 1.0));
    EXPECT_DOUBLE_EQ(f.forces[0][1], 0.0);
}

TEST(NebForces, PerpendicularPartOnly) {
    // Tilted band across the trough: the true force along y must lose its tangential part.
    Trough t;
    auto b = interpolate_band(Vector{0, -1}, Vector{2, 1}, 3);
    b.images[1] = {1.0, 0.5};
    auto f = neb_forces(t, b, 1.0, 1.0);
    const auto& tau = f.tangents[0];
    EXPECT_NEAR(norm(tau), 1.0, 1e-15);
    EXPECT_NEAR(dot(f.perpendicular[0], tau), 0.0, 1e-15);
}

TEST(OptimizeBand, RejectsLineSearchReference) {
    auto s = leps_setup("leps1");
    EXPECT_THROW(optimize_band(*s.pes, s.band, OptimizerKind::ref_cg), InputError);
}

TEST(OptimizeBand, EndpointsUnchangedAndCountingIdentity) {
    auto s = leps_setup("leps1");
    for (auto k : {OptimizerKind::fire, OptimizerKind::acc_cg, OptimizerKind::aare_pr, OptimizerKind::aare_fr}) {
        CountingPotential counted(*s.pes);
        auto res = optimize_band(counted, s.band, k);
        ASSERT_TRUE(res.report.converged) << to_string(k);
        EXPECT_EQ(res.band.images.front(), s.band.images.front());
        EXPECT_EQ(res.band.images.back(), s.band.images.back());
        EXPECT_EQ(res.report.n_force_evals, counted.count());
        EXPECT_EQ(counted.count(), 2 + res.assemblies * 10);
        EXPECT_EQ(res.report.norm_history.back().n_evals, res.report.n_force_evals);
    }
}

TEST(OptimizeBand, MinimalBandRuns) {
    auto s = leps_setup("leps1", 3);
    auto res = optimize_band(*s.pes, s.band, OptimizerKind::aare_fr);
    EXPECT_TRUE(res.report.converged);
    EXPECT_EQ(res.report.n_force_evals, 2 + res.assemblies);
}

TEST(OptimizeBand, TangentsStayUnitLength) {
    auto s = leps_setup("leps2");
    BandPotential bp(*s.pes, s.band);
    FireParams p;
    std::size_t checked = 0;
    p.observer = [&](const FireState&) {
        for (const auto& t : bp.last_forces().tangents) {
            EXPECT_NEAR(norm(t), 1.0, 1e-12);
            ++checked;
        }
    };
    auto r = run_fire(bp, s.band.flatten_interior(), p);
    EXPECT_TRUE(r.converged);
    EXPECT_GT(checked, 100u);
}

TEST(OptimizeBand, SnapshotsFollowTrajectory) {
    auto s = leps_setup("leps1");
    OptimizerSettings set;
    set.stop.record_trajectory = true;
    auto res = optimize_band(*s.pes, s.band, OptimizerKind::aare_fr, set);
    ASSERT_EQ(res.snapshots.size(), res.assemblies);
    EXPECT_EQ(res.snapshots.front().n_evals, 12u);
    EXPECT_EQ(res.snapshots.back().n_evals, res.report.n_force_evals);
    EXPECT_EQ(res.snapshots.back().images, res.band.images);
}

class LepsBand : public ::testing::TestWithParam<std::tuple<std::string, OptimizerKind>> {};

TEST_P(LepsBand, ConvergedBandIsOnTheMinimumEnergyPath) {
    const auto& [surface, kind] = GetParam();
    auto s = leps_setup(surface);
    auto res = optimize_band(*s.pes, s.band, kind);
    ASSERT_TRUE(res.report.converged);
    EXPECT_LT(res.forces.max_perpendicular_norm(), 0.01);
    EXPECT_LT(norm(res.forces.stacked()), 0.01);
    const Vector saddle = surface == "leps1" ? relax::testing::grid_saddle(*s.pes, {0.6, 0.6}, {2.5, 2.5}, 0.02)
                                             : relax::testing::grid_saddle(*s.pes, {0.8, -2.5}, {2.9, 2.5}, 0.02);
    const double e_saddle = s.pes->energy(saddle);
    const double e_band = *std::max_element(res.forces.energies.begin(), res.forces.energies.end());
    EXPECT_LE(std::abs(e_band - e_saddle), 0.05 * std::abs(e_saddle))
        << "band max " << e_band << " vs saddle " << e_saddle << " at " << format_coords(saddle);
}

INSTANTIATE_TEST_SUITE_P(
    All, LepsBand,
    ::testing::Combine(::testing::Values("leps1", "leps2"),
                       ::testing::Values(OptimizerKind::fire, OptimizerKind::acc_cg, OptimizerKind::aare_pr,
                                         OptimizerKind::aare_fr)),
    [](const auto& info) {
        std::string n = std::get<0>(info.param) + "_" + std::string(to_string(std::get<1>(info.param)));
        for (char& c : n)
            if (c == '-') c = '_';
        return n;
    });
