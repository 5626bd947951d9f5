#include "groupvote/objectives.hpp"

#include <algorithm>
#include <limits>

namespace groupvote {

namespace {

void check_alt(const Instance& inst, std::size_t x) {
    if (x >= inst.alternatives()) {
        throw IndexError("alternative " + std::to_string(x) + " out of range (m = " +
                         std::to_string(inst.alternatives()) + ")");
    }
}

void check_grouping(const Instance& inst, const Grouping& grp) {
    if (grp.agents() != inst.agents()) {
        throw GroupingError("grouping covers " + std::to_string(grp.agents()) + " agents, instance has " +
                            std::to_string(inst.agents()));
    }
}

}  // namespace

double max_of_avg(const Instance& inst, const Grouping& grp, std::size_t x) {
    check_alt(inst, x);
    check_grouping(inst, grp);
    double worst = 0;
    for (const auto& group : grp) {
        double total = 0;
        for (std::size_t i : group) total += inst.agent_alt(i, x);
        worst = std::max(worst, total / static_cast<double>(group.size()));
    }
    return worst;
}

double avg_of_max(const Instance& inst, const Grouping& grp, std::size_t x) {
    check_alt(inst, x);
    check_grouping(inst, grp);
    double total = 0;
    for (const auto& group : grp) {
        double far = 0;
        for (std::size_t i : group) far = std::max(far, inst.agent_alt(i, x));
        total += far;
    }
    return total / static_cast<double>(grp.size());
}

double cost(const Instance& inst, const Grouping& grp, Objective obj, std::size_t x) {
    return obj == Objective::MaxOfAvg ? max_of_avg(inst, grp, x) : avg_of_max(inst, grp, x);
}

CostProfile cost_profile(const Instance& inst, const Grouping& grp, Objective obj) {
    CostProfile out;
    out.costs.reserve(inst.alternatives());
    for (std::size_t x = 0; x < inst.alternatives(); ++x) out.costs.push_back(cost(inst, grp, obj, x));
    const double best = *std::min_element(out.costs.begin(), out.costs.end());
    for (std::size_t x = 0; x < out.costs.size(); ++x) {
        if (out.costs[x] == best) out.argmin.push_back(x);
    }
    return out;
}

OptimalAlternative optimal_alternative(const Instance& inst, const Grouping& grp, Objective obj) {
    const CostProfile profile = cost_profile(inst, grp, obj);
    return {profile.argmin.front(), profile.min_cost()};
}

double distortion_ratio(double winner_cost, double opt_cost) noexcept {
    if (opt_cost > 0) return winner_cost / opt_cost;
    return winner_cost > 0 ? std::numeric_limits<double>::infinity() : 1.0;
}

DistortionReport distortion(const Instance& inst, const Grouping& grp, Objective obj, std::size_t winner,
                            std::string mechanism) {
    check_alt(inst, winner);
    const OptimalAlternative opt = optimal_alternative(inst, grp, obj);
    DistortionReport report;
    report.winner = winner;
    report.winner_cost = cost(inst, grp, obj, winner);
    report.opt = opt.alternative;
    report.opt_cost = opt.cost;
    report.ratio = distortion_ratio(report.winner_cost, report.opt_cost);
    report.unbounded = report.opt_cost <= 0 && report.winner_cost > 0;
    report.objective = obj;
    report.mechanism = std::move(mechanism);
    return report;
}

}  // namespace groupvote
