#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "groupvote/core.hpp"

namespace groupvote {

// ---------------------------------------------------------------------------
// Lower-bound families. Every family puts alternative a at index 0 and makes
// it the designated winner; the layouts are tied on whatever statistic the
// corresponding mechanism looks at, so lowest-index tie-breaking picks a.

enum class Family { FullMaxAvg, FullAvgMaxSym, FullAvgMaxAsym, OrdMaxAvg, OrdAvgMaxSym, OrdAvgMaxAsym };

inline constexpr Family kAllFamilies[] = {Family::FullMaxAvg, Family::FullAvgMaxSym, Family::FullAvgMaxAsym,
                                          Family::OrdMaxAvg,  Family::OrdAvgMaxSym,  Family::OrdAvgMaxAsym};

std::string_view to_string(Family f) noexcept;
Family parse_family(std::string_view text);

struct FamilyParams {
    std::optional<std::size_t> lambda;
    std::optional<std::size_t> k;
    std::optional<double> epsilon;
};

struct LowerBoundInstance {
    Instance inst;
    Grouping grp;
    std::size_t adversarial_winner = 0;
    Objective objective = Objective::MaxOfAvg;
    double predicted_ratio = 1;
    Family family = Family::FullMaxAvg;
    FamilyParams params;
};

// a@1, b@3; lambda agents at 0, lambda(lambda-1) at 2, lambda at 4;
// k = lambda+1 groups of size lambda. Ratio 3*lambda/(lambda+2).
LowerBoundInstance gen_full_maxavg(std::size_t lambda);
// Same points, Avg-of-Max. Ratio (3*lambda+1)/(lambda+3).
LowerBoundInstance gen_full_avgmax_symmetric(std::size_t lambda);
// a@0, b@1; k agents at each. Ratio k.
LowerBoundInstance gen_full_avgmax_asym(std::size_t k);
// lambda odd >= 3. Ratio (5*lambda+1)/(lambda+1).
LowerBoundInstance gen_ordinal_maxavg(std::size_t lambda);
// lambda groups of {lambda-1 agents at 1-epsilon/10, 1 at 3}, lambda-2 groups
// of lambda agents at 2; a@0, b@2. Ratio (3*lambda + 2*(lambda-2)) /
// (lambda*(1+epsilon/10)) = (5*lambda-4)/(lambda*(1+epsilon/10)).
LowerBoundInstance gen_ordinal_avgmax_symmetric(std::size_t lambda, double epsilon = 0.1);
// Ratio 2k+1.
LowerBoundInstance gen_ordinal_avgmax_asym(std::size_t k);

// Dispatch by family; reads lambda or k (and epsilon) from params.
LowerBoundInstance make_lower_bound(Family family, const FamilyParams& params);

// ---------------------------------------------------------------------------
// Worst grouping for a fixed metric and winner.

struct WorstGrouping {
    Grouping grouping;
    double ratio = 1;
    std::uint64_t partitions = 0;  // how many partitions were evaluated
};

// Exhaustive over all partitions into exactly k non-empty groups (or only the
// equal-size ones). Refuses with BudgetExceeded when n > max_agents.
WorstGrouping worst_grouping(const Instance& inst, std::size_t k, Objective obj, std::size_t winner,
                             bool symmetric_only, std::size_t max_agents = 12);

// ---------------------------------------------------------------------------
// Worst metric for a fixed profile, grouping and winner.

struct LpAuditOptions {
    std::size_t max_points = 25;          // n + m
    std::uint64_t max_programs = 200000;  // LPs in the decomposition
};

struct LpAudit {
    double ratio = 1;  // +inf when unbounded
    bool unbounded = false;
    std::optional<Instance> witness;  // absent when unbounded
    std::size_t worst_alternative = 0;  // the alternative playing the optimum
    std::uint64_t programs = 0;
};

// sup over metrics consistent with the profile (and with the pinned m x m
// alternative distances, when given) of cost(winner) / min_x cost(x).
LpAudit lp_worst_metric(const OrdinalProfile& profile, const Grouping& grp, std::size_t winner, Objective obj,
                        const std::vector<double>* pinned_alt_dists = nullptr, const LpAuditOptions& options = {});

struct GridAuditOptions {
    std::size_t max_points = 8;
    std::uint64_t max_placements = 500'000'000;
};

struct GridAudit {
    double ratio = 1;
    std::optional<Instance> witness;  // a line instance attaining ratio, if any placement was consistent
    std::uint64_t placements = 0;     // consistent placements evaluated
};

// Exhaustive search over line placements on {0, step, 2*step, ...} within
// [0, span] that are consistent with the profile. Always a lower bound on
// lp_worst_metric for the same inputs.
GridAudit grid_worst_metric(const OrdinalProfile& profile, const Grouping& grp, std::size_t winner, Objective obj,
                            double grid_step, double span, const GridAuditOptions& options = {});

}  // namespace groupvote
