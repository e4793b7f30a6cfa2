#pragma once

// Name-based dispatch over every optimizer.

#include <array>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "relax/error.hpp"
#include "relax/opt/aare.hpp"
#include "relax/opt/acc_cg.hpp"
#include "relax/opt/fire.hpp"
#include "relax/opt/reference.hpp"

namespace relax {

enum class OptimizerKind { fire, fire_sd, fire_pr, aare_pr, aare_fr, acc_cg, ref_sd, ref_cg };

inline constexpr std::array<std::pair<OptimizerKind, std::string_view>, 8> kOptimizerNames{{
    {OptimizerKind::fire, "fire"},
    {OptimizerKind::fire_sd, "fire-sd"},
    {OptimizerKind::fire_pr, "fire-pr"},
    {OptimizerKind::aare_pr, "aare-pr"},
    {OptimizerKind::aare_fr, "aare-fr"},
    {OptimizerKind::acc_cg, "acc-cg"},
    {OptimizerKind::ref_sd, "ref-sd"},
    {OptimizerKind::ref_cg, "ref-cg"},
}};

inline std::string_view to_string(OptimizerKind k) {
    for (const auto& [kind, name] : kOptimizerNames)
        if (kind == k) return name;
    return "unknown";
}

inline std::vector<std::string> optimizer_names() {
    std::vector<std::string> out;
    for (const auto& [kind, name] : kOptimizerNames) out.emplace_back(name);
    return out;
}

inline OptimizerKind parse_optimizer(std::string_view name) {
    for (const auto& [kind, n] : kOptimizerNames)
        if (n == name) return kind;
    std::string list;
    for (const auto& n : optimizer_names()) list += (list.empty() ? "" : ", ") + n;
    throw LookupError("unknown optimizer '" + std::string(name) + "'; available: " + list, optimizer_names());
}

/// Per-family parameters; `stop` overrides the stopping rule of whichever family runs.
struct OptimizerSettings {
    StopCriteria stop;
    FireParams fire;
    AareParams aare;
    AccCgParams acc_cg;
    ReferenceParams reference;
};

inline RunReport run_optimizer(OptimizerKind kind, const Potential& p, std::span<const double> r0,
                               const OptimizerSettings& s = {}) {
    auto with_stop = [&](auto params) {
        static_cast<StopCriteria&>(params) = s.stop;
        return params;
    };
    switch (kind) {
        case OptimizerKind::fire: return run_fire_variant(p, r0, with_stop(s.fire), FireVariant::mix);
        case OptimizerKind::fire_sd: return run_fire_variant(p, r0, with_stop(s.fire), FireVariant::sd);
        case OptimizerKind::fire_pr: return run_fire_variant(p, r0, with_stop(s.fire), FireVariant::pr);
        case OptimizerKind::aare_pr: {
            auto a = with_stop(s.aare);
            a.beta_kind = BetaKind::pr;
            return run_aare(p, r0, a);
        }
        case OptimizerKind::aare_fr: {
            auto a = with_stop(s.aare);
            a.beta_kind = BetaKind::fr;
            return run_aare(p, r0, a);
        }
        case OptimizerKind::acc_cg: return run_acc_cg(p, r0, with_stop(s.acc_cg));
        case OptimizerKind::ref_sd: {
            auto r = with_stop(s.reference);
            r.method = ReferenceMethod::sd;
            return run_reference(p, r0, r);
        }
        case OptimizerKind::ref_cg: {
            auto r = with_stop(s.reference);
            r.method = ReferenceMethod::cg_pr;
            return run_reference(p, r0, r);
        }
    }
    throw ContractError("unhandled optimizer kind");
}

}  // namespace relax
