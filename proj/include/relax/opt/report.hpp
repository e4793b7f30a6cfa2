#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "relax/error.hpp"
#include "relax/vec.hpp"

namespace relax {

enum class EventKind {
    brake,
    overshoot_backtrack,
    dt_increase,
    dt_decrease,
    direction_switch,
    beta_fallback,
    newton_fallback,
    step_doubling,
    secant_refine,
    refine_exhausted,
    step_accepted,
    direction_restart,
    stationary,
};

inline constexpr std::string_view to_string(EventKind k) {
    switch (k) {
        case EventKind::brake: return "brake";
        case EventKind::overshoot_backtrack: return "overshoot_backtrack";
        case EventKind::dt_increase: return "dt_increase";
        case EventKind::dt_decrease: return "dt_decrease";
        case EventKind::direction_switch: return "direction_switch";
        case EventKind::beta_fallback: return "beta_fallback";
        case EventKind::newton_fallback: return "newton_fallback";
        case EventKind::step_doubling: return "step_doubling";
        case EventKind::secant_refine: return "secant_refine";
        case EventKind::refine_exhausted: return "refine_exhausted";
        case EventKind::step_accepted: return "step_accepted";
        case EventKind::direction_restart: return "direction_restart";
        case EventKind::stationary: return "stationary";
    }
    return "unknown";
}

inline EventKind event_kind_from_string(std::string_view s) {
    for (int i = 0; i <= static_cast<int>(EventKind::stationary); ++i) {
        const auto k = static_cast<EventKind>(i);
        if (to_string(k) == s) return k;
    }
    throw InputError("unknown event kind '" + std::string(s) + "'");
}

enum class RunStatus { converged, budget_exceeded, stationary, numerical_failure, domain_failure };

inline constexpr std::string_view to_string(RunStatus s) {
    switch (s) {
        case RunStatus::converged: return "converged";
        case RunStatus::budget_exceeded: return "budget_exceeded";
        case RunStatus::stationary: return "stationary";
        case RunStatus::numerical_failure: return "numerical_failure";
        case RunStatus::domain_failure: return "domain_failure";
    }
    return "unknown";
}

inline RunStatus run_status_from_string(std::string_view s) {
    for (int i = 0; i <= static_cast<int>(RunStatus::domain_failure); ++i) {
        const auto k = static_cast<RunStatus>(i);
        if (to_string(k) == s) return k;
    }
    throw InputError("unknown run status '" + std::string(s) + "'");
}

inline constexpr double kUnset = std::numeric_limits<double>::quiet_NaN();

/// `before`/`after` hold the quantity the event changed (dt, speed, beta,
/// step length or angle); NaN when not applicable.
struct Event {
    std::uint64_t iteration = 0;
    std::uint64_t n_evals = 0;
    EventKind kind = EventKind::brake;
    double before = kUnset;
    double after = kUnset;
    Vector position;
    std::string detail;
};

/// `step` is dt for MD-based methods and the step length for line-search methods.
struct NormSample {
    std::uint64_t n_evals = 0;
    double force_norm = 0.0;
    double step = kUnset;
};

struct TrajectoryPoint {
    std::uint64_t n_evals = 0;
    Vector position;
};

struct RunReport {
    std::string optimizer;
    bool converged = false;
    RunStatus status = RunStatus::budget_exceeded;
    std::uint64_t n_force_evals = 0;
    Vector final_r;
    double final_force_norm = kUnset;
    double final_energy = kUnset;
    std::vector<NormSample> norm_history;
    std::vector<TrajectoryPoint> trajectory;
    std::vector<Event> events;
    std::string message;

    std::size_t count(EventKind k) const {
        std::size_t n = 0;
        for (const auto& e : events) n += e.kind == k;
        return n;
    }
};

/// Stopping rule shared by every optimizer.
struct StopCriteria {
    double f_tol = 0.01;
    std::uint64_t max_evals = 100000;
    bool record_trajectory = false;

    void validate() const {
        if (!(f_tol > 0.0)) throw InputError("f_tol must be positive");
        if (max_evals == 0) throw InputError("max_evals must be >= 1");
    }
};

}  // namespace relax
