#pragma once

#include <optional>
#include <vector>

#include "groupvote/core.hpp"

namespace groupvote {

/// Bipartite agents x agents graph of an alternative x: left agent i has an
/// edge to right agent j iff i ranks x no lower than top(j).
struct DominationGraph {
    std::size_t n = 0;
    std::vector<std::vector<std::size_t>> edges;  // edges[i] = right neighbours, ascending

    bool has_edge(std::size_t i, std::size_t j) const;
    std::size_t edge_count() const;
    friend bool operator==(const DominationGraph&, const DominationGraph&) = default;
};

DominationGraph domination_graph(const OrdinalProfile& profile, std::size_t x);

/// mate[i] = right vertex matched to left vertex i.
struct PerfectMatching {
    std::vector<std::size_t> mate;
};

// Hopcroft-Karp. Returns a witness iff a perfect matching exists.
std::optional<PerfectMatching> has_perfect_matching(const DominationGraph& g);

// Size of a maximum matching (useful for diagnostics and tests).
std::size_t maximum_matching_size(const DominationGraph& g);

// Witness check: mate is a bijection and every pair is an edge.
bool is_perfect_matching(const DominationGraph& g, const PerfectMatching& m);

// d(x,y) <= (4/n) * sum_i d(i,y) + 1e-9, for an x whose domination graph
// (under the instance's induced profile) has a perfect matching. Throws
// PreconditionError when it does not.
bool lemma_distance_bound_holds(const Instance& inst, const Grouping& grp, std::size_t x, std::size_t y);

}  // namespace groupvote
