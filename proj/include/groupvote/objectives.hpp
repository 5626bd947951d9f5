#pragma once

#include <string>
#include <vector>

#include "groupvote/core.hpp"

namespace groupvote {

/// max over groups of the group's average distance to x.
double max_of_avg(const Instance& inst, const Grouping& grp, std::size_t x);

/// average over groups of the group's largest distance to x.
double avg_of_max(const Instance& inst, const Grouping& grp, std::size_t x);

double cost(const Instance& inst, const Grouping& grp, Objective obj, std::size_t x);

struct CostProfile {
    std::vector<double> costs;         // one per alternative
    std::vector<std::size_t> argmin;   // ascending; never empty
    double min_cost() const { return costs[argmin.front()]; }
};

CostProfile cost_profile(const Instance& inst, const Grouping& grp, Objective obj);

struct OptimalAlternative {
    std::size_t alternative;
    double cost;
};

// Exhaustive scan; ties go to the lowest index.
OptimalAlternative optimal_alternative(const Instance& inst, const Grouping& grp, Objective obj);

// winner_cost / opt_cost with 0/0 = 1 and x/0 = +inf.
double distortion_ratio(double winner_cost, double opt_cost) noexcept;

struct DistortionReport {
    std::size_t winner = 0;
    double winner_cost = 0;
    std::size_t opt = 0;
    double opt_cost = 0;
    double ratio = 1;
    bool unbounded = false;  // opt_cost == 0 < winner_cost
    Objective objective = Objective::MaxOfAvg;
    std::string mechanism;
};

DistortionReport distortion(const Instance& inst, const Grouping& grp, Objective obj, std::size_t winner,
                            std::string mechanism = {});

}  // namespace groupvote
