#pragma once

// Bookkeeping shared by every optimizer driver: counted evaluations, budget,
// convergence at every evaluated point, and the report under construction.

#include <cmath>
#include <span>
#include <string>
#include <utility>

#include "relax/error.hpp"
#include "relax/opt/report.hpp"
#include "relax/pes/potential.hpp"

namespace relax::detail {

/// Thrown inside a driver body to end the run with the given status.
struct StopRun {
    RunStatus status;
    std::string message;
};

class Tracker {
public:
    Tracker(const Potential& p, std::string optimizer, const StopCriteria& stop)
        : counter_(p), stop_(stop) {
        report_.optimizer = std::move(optimizer);
    }

    /// Counted force evaluation. Ends the run when the budget is spent or the
    /// evaluated point satisfies the force tolerance.
    Evaluation eval(std::span<const double> r) {
        if (counter_.count() >= stop_.max_evals)
            throw StopRun{RunStatus::budget_exceeded,
                          "force-evaluation budget of " + std::to_string(stop_.max_evals) + " exhausted"};
        Evaluation e = counter_.evaluate(r);
        const double fn = norm(e.force);
        last_r_.assign(r.begin(), r.end());
        last_energy_ = e.energy;
        last_norm_ = fn;
        report_.norm_history.push_back({counter_.count(), fn, step});
        if (stop_.record_trajectory) report_.trajectory.push_back({counter_.count(), last_r_});
        if (fn < stop_.f_tol) throw StopRun{RunStatus::converged, {}};
        return e;
    }

    void event(EventKind kind, double before = kUnset, double after = kUnset,
               std::span<const double> position = {}, std::string detail = {}) {
        report_.events.push_back({iteration, counter_.count(), kind, before, after,
                                  Vector(position.begin(), position.end()), std::move(detail)});
    }

    std::uint64_t n_evals() const noexcept { return counter_.count(); }
    const StopCriteria& stop() const noexcept { return stop_; }

    RunReport finish(RunStatus status, std::string message) {
        report_.status = status;
        report_.message = std::move(message);
        report_.n_force_evals = counter_.count();
        report_.final_r = last_r_;
        report_.final_force_norm = last_norm_;
        report_.final_energy = last_energy_;
        report_.converged = status == RunStatus::converged ||
                            (status == RunStatus::stationary && last_norm_ < stop_.f_tol);
        return std::move(report_);
    }

    double step = kUnset;        // reported alongside each norm sample
    std::uint64_t iteration = 0;

private:
    CountingPotential counter_;
    StopCriteria stop_;
    RunReport report_;
    Vector last_r_;
    double last_energy_ = kUnset;
    double last_norm_ = kUnset;
};

/// Runs `body(tracker)` and converts every expected way a run can end into a report.
template <class Body>
RunReport drive(const Potential& p, std::span<const double> r0, std::string optimizer,
                const StopCriteria& stop, Body&& body) {
    stop.validate();
    if (r0.size() != p.dim())
        throw InputError(optimizer + ": start point has dim " + std::to_string(r0.size()) +
                         ", potential expects " + std::to_string(p.dim()));
    Tracker t(p, std::move(optimizer), stop);
    try {
        body(t);
    } catch (const StopRun& s) {
        return t.finish(s.status, s.message);
    } catch (const DegenerateError& e) {
        t.event(EventKind::stationary, kUnset, kUnset, {}, e.what());
        return t.finish(RunStatus::stationary, e.what());
    } catch (const NumericalError& e) {
        return t.finish(RunStatus::numerical_failure, e.what());
    } catch (const DomainError& e) {
        return t.finish(RunStatus::domain_failure, e.what());
    }
    throw ContractError("optimizer body returned without a stop condition");
}

}  // namespace relax::detail
