#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "groupvote/adversary.hpp"
#include "groupvote/harness.hpp"
#include "groupvote/matching.hpp"
#include "groupvote/mechanisms.hpp"
#include "groupvote/rng.hpp"

using namespace groupvote;

namespace {

// Tries every bijection.
bool brute_force_perfect(const DominationGraph& g) {
    std::vector<std::size_t> perm(g.n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    do {
        bool ok = true;
        for (std::size_t i = 0; i < g.n && ok; ++i) ok = g.has_edge(i, perm[i]);
        if (ok) return true;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return false;
}

OrdinalProfile random_profile(std::size_t n, std::size_t m, Rng& rng) {
    std::vector<std::vector<std::size_t>> rankings(n, std::vector<std::size_t>(m));
    for (auto& r : rankings) {
        std::iota(r.begin(), r.end(), std::size_t{0});
        rng.shuffle(r);
    }
    return OrdinalProfile(m, rankings);
}

}  // namespace

TEST_CASE("domination graph examples") {
    SUBCASE("unanimous favourite gives the complete graph") {
        const OrdinalProfile p(3, {{0, 1, 2}, {0, 2, 1}, {0, 1, 2}});
        const DominationGraph g = domination_graph(p, 0);
        CHECK(g.edge_count() == 9);
    }
    SUBCASE("two agents with opposite rankings") {
        const OrdinalProfile p(2, {{0, 1}, {1, 0}});
        const DominationGraph g = domination_graph(p, 0);
        CHECK(g.edges[0] == std::vector<std::size_t>{0, 1});
        CHECK(g.edges[1] == std::vector<std::size_t>{0});
        const auto pm = has_perfect_matching(g);
        REQUIRE(pm.has_value());
        CHECK(pm->mate == std::vector<std::size_t>{1, 0});
        CHECK(is_perfect_matching(g, *pm));
    }
    SUBCASE("single agent") {
        const OrdinalProfile p(4, {{2, 0, 3, 1}});
        const DominationGraph g = domination_graph(p, 2);
        CHECK(g.edge_count() == 1);
        CHECK(g.has_edge(0, 0));
    }
}

TEST_CASE("perfect matching on hand-made graphs") {
    DominationGraph complete{3, {{0, 1, 2}, {0, 1, 2}, {0, 1, 2}}};
    CHECK(has_perfect_matching(complete).has_value());

    DominationGraph isolated_right{3, {{0, 1}, {0, 1}, {0, 1}}};  // right vertex 2 has no edge
    CHECK_FALSE(has_perfect_matching(isolated_right).has_value());
    CHECK(maximum_matching_size(isolated_right) == 2);

    DominationGraph bad{2, {{0}, {0}}};
    CHECK_FALSE(is_perfect_matching(bad, PerfectMatching{{0, 0}}));
    CHECK_FALSE(is_perfect_matching(complete, PerfectMatching{{0, 1}}));
}

TEST_CASE("Hopcroft-Karp agrees with exhaustive bijection search") {
    Rng rng(12345);
    for (int trial = 0; trial < 2000; ++trial) {
        const std::size_t n = 1 + rng.below(std::uint64_t{7});
        DominationGraph g{n, std::vector<std::vector<std::size_t>>(n)};
        const double density = rng.uniform01();
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                if (rng.uniform01() < density) g.edges[i].push_back(j);
            }
        }
        const auto pm = has_perfect_matching(g);
        CHECK(pm.has_value() == brute_force_perfect(g));
        if (pm) CHECK(is_perfect_matching(g, *pm));
    }
}

TEST_CASE("domination graph depends on the profile only") {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const RandomInstance ri = gen_random_euclidean(8, 4, 2, 2, seed, false);
        const OrdinalProfile p = ordinal_profile_from_instance(ri.instance);
        const OrdinalProfile q = ordinal_profile_from_instance(ri.instance.scaled(17.5));
        for (std::size_t x = 0; x < 4; ++x) CHECK(domination_graph(p, x) == domination_graph(q, x));
    }
}

TEST_CASE("some alternative always has a perfect matching") {
    Rng rng(99);
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t n = 1 + rng.below(std::uint64_t{12});
        const std::size_t m = 2 + rng.below(std::uint64_t{4});
        const OrdinalProfile p = random_profile(n, m, rng);
        bool any = false;
        for (std::size_t x = 0; x < m; ++x) {
            const DominationGraph g = domination_graph(p, x);
            const auto pm = has_perfect_matching(g);
            if (pm) {
                any = true;
                CHECK(is_perfect_matching(g, *pm));
            }
        }
        CHECK(any);
    }
}

TEST_CASE("distance lemma") {
    SUBCASE("y = x") {
        const RandomInstance ri = gen_random_euclidean(5, 3, 1, 2, 4, false);
        const std::size_t x = matching_winner(Ordinal{ordinal_profile_from_instance(ri.instance)});
        CHECK(lemma_distance_bound_holds(ri.instance, ri.grouping, x, x));
    }
    SUBCASE("ordinal Max-of-Avg family, lambda=3") {
        const LowerBoundInstance lb = gen_ordinal_maxavg(3);
        const OrdinalProfile p = ordinal_profile_from_instance(lb.inst);
        const std::size_t x = matching_winner(Ordinal{p});
        CHECK(x == 0);
        // d(a,b) = 2 against (4/n) * sum_i d(i,b); evaluate both sides here too.
        double sum = 0;
        for (std::size_t i = 0; i < lb.inst.agents(); ++i) sum += lb.inst.agent_alt(i, 1);
        CHECK(lb.inst.alt_alt(0, 1) <= 4.0 / static_cast<double>(lb.inst.agents()) * sum);
        CHECK(lemma_distance_bound_holds(lb.inst, lb.grp, x, 1));
    }
    SUBCASE("random instances") {
        for (std::uint64_t seed = 0; seed < 500; ++seed) {
            const RandomInstance ri = gen_random_euclidean(1 + seed % 15, 2 + seed % 4, 1, 1 + seed % 3, seed, false);
            const OrdinalProfile p = ordinal_profile_from_instance(ri.instance);
            for (std::size_t x = 0; x < ri.instance.alternatives(); ++x) {
                if (!has_perfect_matching(domination_graph(p, x))) {
                    CHECK_THROWS_AS(lemma_distance_bound_holds(ri.instance, ri.grouping, x, 0), PreconditionError);
                    continue;
                }
                for (std::size_t y = 0; y < ri.instance.alternatives(); ++y) {
                    CHECK(lemma_distance_bound_holds(ri.instance, ri.grouping, x, y));
                }
            }
        }
    }
}
