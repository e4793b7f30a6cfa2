#pragma once

#include <string>
#include <utility>
#include <vector>

#include "relax/bench/run_file.hpp"
#include "relax/opt/optimizer.hpp"

namespace relax {

/// Parameters that shaped a run, in a fixed order for reproducible records.
inline std::vector<std::pair<std::string, std::string>> describe_parameters(OptimizerKind kind,
                                                                            const OptimizerSettings& s) {
    using run_file_detail::real;
    std::vector<std::pair<std::string, std::string>> out{
        {"f_tol", real(s.stop.f_tol)},
        {"max_evals", std::to_string(s.stop.max_evals)},
    };
    switch (kind) {
        case OptimizerKind::fire:
        case OptimizerKind::fire_sd:
        case OptimizerKind::fire_pr:
            out.insert(out.end(), {{"alpha_start", real(s.fire.alpha_start)},
                                   {"f_alpha", real(s.fire.f_alpha)},
                                   {"f_inc", real(s.fire.f_inc)},
                                   {"f_dec", real(s.fire.f_dec)},
                                   {"dt_start", real(s.fire.dt_start)},
                                   {"dt_max", real(s.fire.dt_max)},
                                   {"n_min", std::to_string(s.fire.n_min)},
                                   {"mass", real(s.fire.mass)},
                                   {"semi_implicit", s.fire.integrator.semi_implicit ? "true" : "false"},
                                   {"max_step", real(s.fire.integrator.max_step)}});
            break;
        case OptimizerKind::aare_pr:
        case OptimizerKind::aare_fr:
            out.insert(out.end(), {{"dt_start", real(s.aare.dt_start)},
                                   {"dt_max", real(s.aare.dt_max)},
                                   {"f_inc", real(s.aare.f_inc)},
                                   {"f_dec", real(s.aare.f_dec)},
                                   {"mass", real(s.aare.mass)},
                                   {"theta_hs_lo", real(s.aare.theta_hs_lo)},
                                   {"theta_sd_hi", real(s.aare.theta_sd_hi)},
                                   {"semi_implicit", s.aare.integrator.semi_implicit ? "true" : "false"},
                                   {"max_step", real(s.aare.integrator.max_step)}});
            break;
        case OptimizerKind::acc_cg:
            out.insert(out.end(), {{"default_step", real(s.acc_cg.default_step)},
                                   {"cap_factor", real(s.acc_cg.cap_factor)},
                                   {"theta_lo", real(s.acc_cg.theta_lo)},
                                   {"theta_hi", real(s.acc_cg.theta_hi)},
                                   {"max_refines", std::to_string(s.acc_cg.max_refines)}});
            break;
        case OptimizerKind::ref_sd:
        case OptimizerKind::ref_cg:
            out.insert(out.end(), {{"interval_tol", real(s.reference.interval_tol)}});
            break;
    }
    return out;
}

}  // namespace relax
