#include "groupvote/matching.hpp"

#include <algorithm>
#include <limits>
#include <queue>

namespace groupvote {

namespace {

constexpr std::size_t kFree = std::numeric_limits<std::size_t>::max();
constexpr std::size_t kInf = std::numeric_limits<std::size_t>::max();

class HopcroftKarp {
public:
    explicit HopcroftKarp(const DominationGraph& g)
        : g_(g), left_(g.n, kFree), right_(g.n, kFree), layer_(g.n), next_edge_(g.n) {}

    std::size_t run() {
        std::size_t size = 0;
        while (bfs()) {
            std::fill(next_edge_.begin(), next_edge_.end(), 0);
            for (std::size_t u = 0; u < g_.n; ++u) {
                if (left_[u] == kFree && dfs(u)) ++size;
            }
        }
        return size;
    }

    const std::vector<std::size_t>& left_mates() const { return left_; }

private:
    bool bfs() {
        std::queue<std::size_t> queue;
        bool found_free = false;
        for (std::size_t u = 0; u < g_.n; ++u) {
            if (left_[u] == kFree) {
                layer_[u] = 0;
                queue.push(u);
            } else {
                layer_[u] = kInf;
            }
        }
        while (!queue.empty()) {
            const std::size_t u = queue.front();
            queue.pop();
            for (std::size_t v : g_.edges[u]) {
                const std::size_t w = right_[v];
                if (w == kFree) {
                    found_free = true;
                } else if (layer_[w] == kInf) {
                    layer_[w] = layer_[u] + 1;
                    queue.push(w);
                }
            }
        }
        return found_free;
    }

    // Recursion depth is bounded by the augmenting path length (<= n).
    bool dfs(std::size_t u) {
        const auto& adj = g_.edges[u];
        for (std::size_t& k = next_edge_[u]; k < adj.size(); ++k) {
            const std::size_t v = adj[k];
            const std::size_t w = right_[v];
            if (w == kFree || (layer_[w] == layer_[u] + 1 && dfs(w))) {
                left_[u] = v;
                right_[v] = u;
                ++k;
                return true;
            }
        }
        layer_[u] = kInf;
        return false;
    }

    const DominationGraph& g_;
    std::vector<std::size_t> left_;
    std::vector<std::size_t> right_;
    std::vector<std::size_t> layer_;
    std::vector<std::size_t> next_edge_;
};

}  // namespace

bool DominationGraph::has_edge(std::size_t i, std::size_t j) const {
    const auto& adj = edges.at(i);
    return std::binary_search(adj.begin(), adj.end(), j);
}

std::size_t DominationGraph::edge_count() const {
    std::size_t total = 0;
    for (const auto& adj : edges) total += adj.size();
    return total;
}

DominationGraph domination_graph(const OrdinalProfile& profile, std::size_t x) {
    if (x >= profile.alternatives()) {
        throw IndexError("alternative " + std::to_string(x) + " out of range (m = " +
                         std::to_string(profile.alternatives()) + ")");
    }
    const std::size_t n = profile.agents();
    DominationGraph g;
    g.n = n;
    g.edges.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t rank_x = profile.rank_position(i, x);
        for (std::size_t j = 0; j < n; ++j) {
            if (rank_x <= profile.rank_position(i, profile.top(j))) g.edges[i].push_back(j);
        }
    }
    return g;
}

std::optional<PerfectMatching> has_perfect_matching(const DominationGraph& g) {
    HopcroftKarp hk(g);
    if (hk.run() != g.n) return std::nullopt;
    return PerfectMatching{hk.left_mates()};
}

std::size_t maximum_matching_size(const DominationGraph& g) {
    return HopcroftKarp(g).run();
}

bool is_perfect_matching(const DominationGraph& g, const PerfectMatching& m) {
    if (m.mate.size() != g.n) return false;
    std::vector<bool> used(g.n, false);
    for (std::size_t i = 0; i < g.n; ++i) {
        const std::size_t j = m.mate[i];
        if (j >= g.n || used[j] || !g.has_edge(i, j)) return false;
        used[j] = true;
    }
    return true;
}

bool lemma_distance_bound_holds(const Instance& inst, const Grouping& grp, std::size_t x, std::size_t y) {
    if (grp.agents() != inst.agents()) throw GroupingError("grouping does not match the instance");
    if (y >= inst.alternatives()) throw IndexError("alternative " + std::to_string(y) + " out of range");
    const OrdinalProfile profile = ordinal_profile_from_instance(inst);
    if (!has_perfect_matching(domination_graph(profile, x))) {
        throw PreconditionError("domination graph of alternative " + std::to_string(x) + " has no perfect matching");
    }
    double total = 0;
    for (const auto& group : grp) {
        for (std::size_t i : group) total += inst.agent_alt(i, y);
    }
    const double bound = 4.0 / static_cast<double>(inst.agents()) * total;
    return inst.alt_alt(x, y) <= bound + 1e-9;
}

}  // namespace groupvote
