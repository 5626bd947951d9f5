#include "groupvote/mechanisms.hpp"

#include <algorithm>
#include <limits>

#include "groupvote/matching.hpp"

namespace groupvote {

namespace {

// First index attaining the minimum of score(x) over x in [0, m).
template <typename Score>
std::size_t argmin_lowest(std::size_t m, Score score) {
    std::size_t best = 0;
    double best_value = score(0);
    for (std::size_t x = 1; x < m; ++x) {
        const double v = score(x);
        if (v < best_value) {
            best = x;
            best_value = v;
        }
    }
    return best;
}

void check_two(const OrdinalProfile& p) {
    if (p.alternatives() != 2) {
        throw AlternativeCountError("mechanism is defined for exactly two alternatives, got m = " +
                                    std::to_string(p.alternatives()));
    }
}

void check_groups(const OrdinalProfile& p, const Grouping& g) {
    if (p.agents() != g.agents()) throw GroupingError("grouping and profile disagree on the number of agents");
}

void check_alt_metric(const GroupAwareWithAltDistances& in) {
    check_groups(in.profile, in.grouping);
    const std::size_t m = in.profile.alternatives();
    if (in.alt_dist.size() != m * m) throw DimensionError("alternative distance matrix must be m x m");
    const ValidationResult v = validate_square_metric(in.alt_dist, m);
    if (!v.ok()) throw MetricError("alternative distances are not a metric: " + describe(v.violations.front()));
}

// Counts of first-place votes per group: counts[g][x].
std::vector<std::vector<std::size_t>> first_place_by_group(const GroupAwareOrdinal& in) {
    std::vector<std::vector<std::size_t>> counts(in.grouping.size(),
                                                 std::vector<std::size_t>(in.profile.alternatives(), 0));
    for (std::size_t g = 0; g < in.grouping.size(); ++g) {
        for (std::size_t i : in.grouping[g]) ++counts[g][in.profile.top(i)];
    }
    return counts;
}

}  // namespace

FullInfo FullInfo::from(const Instance& inst) {
    FullInfo out;
    out.n = inst.agents();
    out.m = inst.alternatives();
    out.dist.reserve(out.n * out.m);
    for (std::size_t i = 0; i < out.n; ++i) {
        for (std::size_t x = 0; x < out.m; ++x) out.dist.push_back(inst.agent_alt(i, x));
    }
    return out;
}

std::string_view to_string(MechanismId id) noexcept {
    switch (id) {
        case MechanismId::MinTotal: return "min-total";
        case MechanismId::MinMax: return "min-max";
        case MechanismId::Matching: return "matching";
        case MechanismId::PluralityVeto: return "plurality-veto";
        case MechanismId::TopChoice: return "top-choice";
        case MechanismId::Gpm: return "gpm";
        case MechanismId::GroupScore: return "group-score";
        case MechanismId::VirtualMma: return "virtual-mma";
        case MechanismId::VirtualVam: return "virtual-vam";
    }
    return "?";
}

MechanismId parse_mechanism(std::string_view text) {
    for (MechanismId id : kAllMechanisms) {
        if (to_string(id) == text) return id;
    }
    throw Error("unknown mechanism '" + std::string(text) + "'");
}

bool is_group_aware(MechanismId id) noexcept {
    return id == MechanismId::Gpm || id == MechanismId::GroupScore || id == MechanismId::VirtualMma ||
           id == MechanismId::VirtualVam;
}

bool requires_two_alternatives(MechanismId id) noexcept {
    return id == MechanismId::Gpm || id == MechanismId::GroupScore;
}

std::size_t min_total_distance(const FullInfo& in) {
    return argmin_lowest(in.m, [&](std::size_t x) {
        double total = 0;
        for (std::size_t i = 0; i < in.n; ++i) total += in.at(i, x);
        return total;
    });
}

std::size_t min_max_distance(const FullInfo& in) {
    return argmin_lowest(in.m, [&](std::size_t x) {
        double far = 0;
        for (std::size_t i = 0; i < in.n; ++i) far = std::max(far, in.at(i, x));
        return far;
    });
}

std::size_t matching_winner(const Ordinal& in) {
    for (std::size_t x = 0; x < in.profile.alternatives(); ++x) {
        if (has_perfect_matching(domination_graph(in.profile, x))) return x;
    }
    throw NoMatchingAlternative("no alternative has a perfect matching in its domination graph");
}

std::size_t plurality_veto(const Ordinal& in, std::span<const std::size_t> order) {
    const OrdinalProfile& p = in.profile;
    const std::size_t n = p.agents();
    if (order.size() != n) throw PreconditionError("veto order must list every agent exactly once");
    std::vector<bool> seen(n, false);
    for (std::size_t i : order) {
        if (i >= n || seen[i]) throw PreconditionError("veto order must be a permutation of the agents");
        seen[i] = true;
    }

    std::vector<std::size_t> score(p.alternatives(), 0);
    for (std::size_t i = 0; i < n; ++i) ++score[p.top(i)];
    std::size_t alive = static_cast<std::size_t>(std::count_if(score.begin(), score.end(), [](auto s) { return s > 0; }));

    for (std::size_t i : order) {
        const auto& ranking = p.ranking(i);
        auto victim = std::find_if(ranking.rbegin(), ranking.rend(), [&](std::size_t x) { return score[x] > 0; });
        // Plurality scores sum to n and each agent removes one point, so a
        // live alternative always exists here.
        if (--score[*victim] == 0 && --alive == 0) return *victim;
    }
    throw InvariantViolation("plurality veto finished with surviving alternatives");
}

std::size_t plurality_veto(const Ordinal& in) {
    std::vector<std::size_t> order(in.profile.agents());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    return plurality_veto(in, order);
}

std::size_t top_choice_winner(const Ordinal& in) {
    std::vector<std::size_t> votes(in.profile.alternatives(), 0);
    for (std::size_t i = 0; i < in.profile.agents(); ++i) ++votes[in.profile.top(i)];
    // max_element returns the first maximum, i.e. the lowest index.
    return static_cast<std::size_t>(std::max_element(votes.begin(), votes.end()) - votes.begin());
}

std::size_t group_proportional_majority(const GroupAwareOrdinal& in) {
    check_two(in.profile);
    check_groups(in.profile, in.grouping);
    const auto counts = first_place_by_group(in);
    // Best proportion per alternative as an exact fraction num/den.
    std::size_t num[2] = {0, 0};
    std::size_t den[2] = {1, 1};
    for (std::size_t g = 0; g < counts.size(); ++g) {
        const std::size_t size = in.grouping[g].size();
        for (std::size_t x = 0; x < 2; ++x) {
            if (counts[g][x] * den[x] > num[x] * size) {
                num[x] = counts[g][x];
                den[x] = size;
            }
        }
    }
    return num[1] * den[0] > num[0] * den[1] ? 1 : 0;
}

std::size_t group_score(const GroupAwareOrdinal& in) {
    check_two(in.profile);
    check_groups(in.profile, in.grouping);
    const auto counts = first_place_by_group(in);
    std::size_t score[2] = {0, 0};
    for (std::size_t g = 0; g < counts.size(); ++g) {
        const std::size_t size = in.grouping[g].size();
        for (std::size_t x = 0; x < 2; ++x) {
            if (counts[g][x] == size) {
                score[x] += 2;
            } else if (counts[g][x] > 0) {
                score[x] += 1;
            }
        }
    }
    return score[1] > score[0] ? 1 : 0;
}

std::size_t virtual_minimax_of_avg(const GroupAwareWithAltDistances& in) {
    check_alt_metric(in);
    const std::size_t m = in.profile.alternatives();
    return argmin_lowest(m, [&](std::size_t x) {
        double worst = 0;
        for (const auto& group : in.grouping) {
            double total = 0;
            for (std::size_t i : group) total += in.alt_dist[in.profile.top(i) * m + x];
            worst = std::max(worst, total / static_cast<double>(group.size()));
        }
        return worst;
    });
}

std::size_t virtual_miniavg_of_max(const GroupAwareWithAltDistances& in) {
    check_alt_metric(in);
    const std::size_t m = in.profile.alternatives();
    return argmin_lowest(m, [&](std::size_t x) {
        double total = 0;
        for (const auto& group : in.grouping) {
            double far = 0;
            for (std::size_t i : group) far = std::max(far, in.alt_dist[in.profile.top(i) * m + x]);
            total += far;
        }
        return total / static_cast<double>(in.grouping.size());
    });
}

MechanismInput mechanism_input(MechanismId id, const Instance& inst, const Grouping& grp) {
    switch (id) {
        case MechanismId::MinTotal:
        case MechanismId::MinMax: return FullInfo::from(inst);
        case MechanismId::Matching:
        case MechanismId::PluralityVeto:
        case MechanismId::TopChoice: return Ordinal{ordinal_profile_from_instance(inst)};
        case MechanismId::Gpm:
        case MechanismId::GroupScore: return GroupAwareOrdinal{ordinal_profile_from_instance(inst), grp};
        case MechanismId::VirtualMma:
        case MechanismId::VirtualVam: {
            const std::size_t m = inst.alternatives();
            std::vector<double> alt(m * m);
            for (std::size_t x = 0; x < m; ++x) {
                for (std::size_t y = 0; y < m; ++y) alt[x * m + y] = inst.alt_alt(x, y);
            }
            return GroupAwareWithAltDistances{ordinal_profile_from_instance(inst), grp, std::move(alt)};
        }
    }
    throw Error("unknown mechanism");
}

std::size_t select_winner(MechanismId id, const MechanismInput& in) {
    auto need = [&]<typename T>(std::type_identity<T>) -> const T& {
        if (const T* p = std::get_if<T>(&in)) return *p;
        throw PreconditionError("mechanism " + std::string(to_string(id)) + " received the wrong information class");
    };
    switch (id) {
        case MechanismId::MinTotal: return min_total_distance(need(std::type_identity<FullInfo>{}));
        case MechanismId::MinMax: return min_max_distance(need(std::type_identity<FullInfo>{}));
        case MechanismId::Matching: return matching_winner(need(std::type_identity<Ordinal>{}));
        case MechanismId::PluralityVeto: return plurality_veto(need(std::type_identity<Ordinal>{}));
        case MechanismId::TopChoice: return top_choice_winner(need(std::type_identity<Ordinal>{}));
        case MechanismId::Gpm: return group_proportional_majority(need(std::type_identity<GroupAwareOrdinal>{}));
        case MechanismId::GroupScore: return group_score(need(std::type_identity<GroupAwareOrdinal>{}));
        case MechanismId::VirtualMma:
            return virtual_minimax_of_avg(need(std::type_identity<GroupAwareWithAltDistances>{}));
        case MechanismId::VirtualVam:
            return virtual_miniavg_of_max(need(std::type_identity<GroupAwareWithAltDistances>{}));
    }
    throw Error("unknown mechanism");
}

std::size_t select_winner(MechanismId id, const Instance& inst, const Grouping& grp) {
    return select_winner(id, mechanism_input(id, inst, grp));
}

}  // namespace groupvote
