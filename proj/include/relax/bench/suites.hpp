#pragma once

// Table suites: run every (row, optimizer) cell with default parameters and
// compare against the expected counts.

#include <cmath>
#include <cstdio>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "relax/bench/expected_counts.hpp"
#include "relax/error.hpp"
#include "relax/neb/band.hpp"
#include "relax/neb/endpoints.hpp"
#include "relax/opt/optimizer.hpp"
#include "relax/pes/catalog.hpp"
#include "relax/pes/leps.hpp"

namespace relax {

enum class Suite { table1, table2, table3, table4 };

inline Suite parse_suite(std::string_view s) {
    if (s == "table1") return Suite::table1;
    if (s == "table2") return Suite::table2;
    if (s == "table3") return Suite::table3;
    if (s == "table4") return Suite::table4;
    throw LookupError("unknown suite '" + std::string(s) + "'; available: table1, table2, table3, table4",
                      {"table1", "table2", "table3", "table4"});
}

inline std::string_view to_string(Suite s) {
    switch (s) {
        case Suite::table1: return "table1";
        case Suite::table2: return "table2";
        case Suite::table3: return "table3";
        case Suite::table4: return "table4";
    }
    return "unknown";
}

inline std::vector<OptimizerKind> suite_columns(Suite s) {
    if (s == Suite::table1) return {OptimizerKind::fire, OptimizerKind::fire_sd, OptimizerKind::fire_pr};
    return {OptimizerKind::fire, OptimizerKind::acc_cg, OptimizerKind::aare_pr, OptimizerKind::aare_fr};
}

struct Cell {
    OptimizerKind optimizer = OptimizerKind::fire;
    std::optional<double> expected;
    RunReport report;
    std::vector<BandSnapshot> snapshots;

    bool within_tolerance() const {
        return expected && report.converged && expected::within(double(report.n_force_evals), *expected);
    }
    double deviation() const {
        return expected ? (double(report.n_force_evals) - *expected) / *expected : std::nan("");
    }
};

struct TableRow {
    std::string label;
    std::string function;
    Vector start;
    std::vector<Cell> cells;

    const Cell& cell(OptimizerKind k) const {
        for (const auto& c : cells)
            if (c.optimizer == k) return c;
        throw InputError("row '" + label + "' has no column " + std::string(to_string(k)));
    }
};

struct TableResult {
    Suite suite = Suite::table2;
    std::vector<OptimizerKind> columns;
    std::vector<TableRow> rows;
    std::uint64_t max_evals = 0;
};

namespace suites_detail {

inline std::optional<double> expected_2d(const expected::Row2D& r, Suite s, OptimizerKind k) {
    switch (k) {
        case OptimizerKind::fire: return s == Suite::table1 ? r.fire_t1 : r.fire;
        case OptimizerKind::fire_sd: return r.fire_sd;
        case OptimizerKind::fire_pr: return r.fire_pr;
        case OptimizerKind::acc_cg: return r.acc_cg;
        case OptimizerKind::aare_pr: return r.aare_pr;
        case OptimizerKind::aare_fr: return r.aare_fr;
        default: return std::nullopt;
    }
}

template <class Row>
std::optional<double> expected_cg_family(const Row& r, OptimizerKind k) {
    switch (k) {
        case OptimizerKind::fire: return r.fire;
        case OptimizerKind::acc_cg: return r.acc_cg;
        case OptimizerKind::aare_pr: return r.aare_pr;
        case OptimizerKind::aare_fr: return r.aare_fr;
        default: return std::nullopt;
    }
}

}  // namespace suites_detail

/// Endpoints and band for a named LEPS surface, as used by the NEB table.
struct LepsSetup {
    std::shared_ptr<const Potential> pes;
    Band band;
};

inline LepsSetup leps_setup(std::string_view name, std::size_t images = expected::kNebImages,
                            double k_spring = expected::kNebSpring) {
    if (name == "leps1") {
        auto p = std::make_shared<const Leps1>();
        auto [a, b] = leps1_endpoints(*p);
        return {p, interpolate_band(a, b, images, k_spring)};
    }
    if (name == "leps2") {
        auto p = std::make_shared<const Leps2>();
        auto [a, b] = leps2_endpoints(*p);
        return {p, interpolate_band(a, b, images, k_spring)};
    }
    throw LookupError("unknown LEPS surface '" + std::string(name) + "'; available: leps1, leps2", {"leps1", "leps2"});
}

/// Runs a table. `only` restricts rows by function or PES name when non-empty.
inline TableResult run_table(Suite suite, const OptimizerSettings& settings = {},
                             const std::vector<std::string>& only = {}) {
    auto wanted = [&](std::string_view name) {
        if (only.empty()) return true;
        for (const auto& o : only)
            if (o == name) return true;
        return false;
    };
    TableResult out;
    out.suite = suite;
    out.columns = suite_columns(suite);
    out.max_evals = settings.stop.max_evals;
    if (suite == Suite::table1 || suite == Suite::table2) {
        for (const auto& r : expected::kTable12) {
            if (!wanted(r.function)) continue;
            TableRow row{std::string(r.label), std::string(r.function), Vector(r.start.begin(), r.start.end()), {}};
            auto f = catalog_lookup(r.function, 2);
            for (auto k : out.columns)
                row.cells.push_back({k, suites_detail::expected_2d(r, suite, k), run_optimizer(k, *f, row.start, settings), {}});
            out.rows.push_back(std::move(row));
        }
    } else if (suite == Suite::table3) {
        for (const auto& r : expected::kTable3) {
            if (!wanted(r.function)) continue;
            TableRow row{std::string(r.label), std::string(r.function), Vector(r.start.begin(), r.start.end()), {}};
            auto f = catalog_lookup(r.function, 4);
            for (auto k : out.columns)
                row.cells.push_back({k, suites_detail::expected_cg_family(r, k), run_optimizer(k, *f, row.start, settings), {}});
            out.rows.push_back(std::move(row));
        }
    } else {
        for (const auto& r : expected::kTable4) {
            if (!wanted(r.pes)) continue;
            const LepsSetup setup = leps_setup(r.pes);
            TableRow row{std::string(r.label), std::string(r.pes), {}, {}};
            for (auto k : out.columns) {
                NebResult res = optimize_band(*setup.pes, setup.band, k, settings);
                row.cells.push_back({k, suites_detail::expected_cg_family(r, k), std::move(res.report), std::move(res.snapshots)});
            }
            out.rows.push_back(std::move(row));
        }
    }
    if (out.rows.empty()) throw InputError("no rows of " + std::string(to_string(suite)) + " match the requested names");
    return out;
}

/// Count used in aggregates: the evaluation count, or the budget when the run did not converge.
inline double aggregate_count(const Cell& c, std::uint64_t max_evals) {
    return c.report.converged ? double(c.report.n_force_evals) : double(max_evals);
}

/// Geometric mean over rows of count(num)/count(den).
inline double geometric_mean_ratio(const TableResult& t, OptimizerKind num, OptimizerKind den) {
    if (t.rows.empty()) throw InputError("geometric_mean_ratio: empty table");
    double log_sum = 0.0;
    for (const auto& row : t.rows)
        log_sum += std::log(aggregate_count(row.cell(num), t.max_evals) / aggregate_count(row.cell(den), t.max_evals));
    return std::exp(log_sum / double(t.rows.size()));
}

inline std::size_t count_within_tolerance(const TableResult& t, OptimizerKind k) {
    std::size_t n = 0;
    for (const auto& row : t.rows) n += row.cell(k).within_tolerance();
    return n;
}

inline std::size_t count_failures(const TableResult& t) {
    std::size_t n = 0;
    for (const auto& row : t.rows)
        for (const auto& c : row.cells) n += !c.report.converged;
    return n;
}

inline std::size_t count_deviations(const TableResult& t) {
    std::size_t n = 0;
    for (const auto& row : t.rows)
        for (const auto& c : row.cells) n += c.expected && !c.within_tolerance();
    return n;
}

/// Fixed-width comparison table. Each cell prints `count (expected, ±dev%)`; a
/// trailing `*` marks a non-converged run. Ratio columns are FIRE / column.
inline std::string format_table(const TableResult& t) {
    std::ostringstream os;
    char buf[128];
    std::snprintf(buf, sizeof buf, "%-24s", "function");
    os << buf;
    for (auto k : t.columns) {
        std::snprintf(buf, sizeof buf, " %24s", std::string(to_string(k)).c_str());
        os << buf;
    }
    for (auto k : t.columns) {
        if (k == OptimizerKind::fire) continue;
        std::snprintf(buf, sizeof buf, " %9s", ("F/" + std::string(to_string(k))).substr(0, 9).c_str());
        os << buf;
    }
    os << '\n';
    for (const auto& row : t.rows) {
        std::snprintf(buf, sizeof buf, "%-24s", row.label.c_str());
        os << buf;
        for (const auto& c : row.cells) {
            std::string s = std::to_string(c.report.n_force_evals) + (c.report.converged ? "" : "*");
            if (c.expected) {
                char dev[48];
                std::snprintf(dev, sizeof dev, " (%d, %+.0f%%)", int(*c.expected), 100.0 * c.deviation());
                s += dev;
            }
            std::snprintf(buf, sizeof buf, " %24s", s.c_str());
            os << buf;
        }
        const Cell& fire = row.cell(OptimizerKind::fire);
        for (const auto& c : row.cells) {
            if (c.optimizer == OptimizerKind::fire) continue;
            std::snprintf(buf, sizeof buf, " %9.2f", double(fire.report.n_force_evals) / double(c.report.n_force_evals));
            os << buf;
        }
        os << '\n';
    }
    const auto fails = count_failures(t);
    if (fails) os << fails << " run(s) did not converge (marked *)\n";
    return os.str();
}

}  // namespace relax
