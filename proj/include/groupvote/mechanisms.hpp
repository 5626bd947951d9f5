#pragma once

#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "groupvote/core.hpp"

namespace groupvote {

// What each class of mechanism is allowed to observe. Group-oblivious
// variants carry no grouping at all.

/// Agent-to-alternative distances only (n x m, row-major).
struct FullInfo {
    std::size_t n = 0;
    std::size_t m = 0;
    std::vector<double> dist;

    double at(std::size_t agent, std::size_t alt) const { return dist[agent * m + alt]; }
    static FullInfo from(const Instance& inst);
};

struct Ordinal {
    OrdinalProfile profile;
};

struct GroupAwareOrdinal {
    OrdinalProfile profile;
    Grouping grouping;
};

struct GroupAwareWithAltDistances {
    OrdinalProfile profile;
    Grouping grouping;
    std::vector<double> alt_dist;  // m x m, row-major
};

using MechanismInput = std::variant<FullInfo, Ordinal, GroupAwareOrdinal, GroupAwareWithAltDistances>;

enum class MechanismId { MinTotal, MinMax, Matching, PluralityVeto, TopChoice, Gpm, GroupScore, VirtualMma, VirtualVam };

inline constexpr MechanismId kAllMechanisms[] = {
    MechanismId::MinTotal,   MechanismId::MinMax, MechanismId::Matching,   MechanismId::PluralityVeto,
    MechanismId::TopChoice,  MechanismId::Gpm,    MechanismId::GroupScore, MechanismId::VirtualMma,
    MechanismId::VirtualVam,
};

std::string_view to_string(MechanismId id) noexcept;
MechanismId parse_mechanism(std::string_view text);  // throws Error on unknown ids
bool is_group_aware(MechanismId id) noexcept;
bool requires_two_alternatives(MechanismId id) noexcept;

// Full information, group-oblivious.
std::size_t min_total_distance(const FullInfo& in);
std::size_t min_max_distance(const FullInfo& in);

// Ordinal, group-oblivious.
std::size_t matching_winner(const Ordinal& in);  // throws NoMatchingAlternative
std::size_t plurality_veto(const Ordinal& in, std::span<const std::size_t> order);
std::size_t plurality_veto(const Ordinal& in);  // agents in index order
std::size_t top_choice_winner(const Ordinal& in);

// Group-aware, two alternatives (throw AlternativeCountError otherwise).
std::size_t group_proportional_majority(const GroupAwareOrdinal& in);
std::size_t group_score(const GroupAwareOrdinal& in);

// Group-aware with known alternative distances (throw MetricError if the
// alternative matrix is not a metric).
std::size_t virtual_minimax_of_avg(const GroupAwareWithAltDistances& in);
std::size_t virtual_miniavg_of_max(const GroupAwareWithAltDistances& in);

// Builds exactly the information class the mechanism is entitled to.
MechanismInput mechanism_input(MechanismId id, const Instance& inst, const Grouping& grp);

// Throws PreconditionError when the input variant does not match the id.
std::size_t select_winner(MechanismId id, const MechanismInput& in);
std::size_t select_winner(MechanismId id, const Instance& inst, const Grouping& grp);

}  // namespace groupvote
