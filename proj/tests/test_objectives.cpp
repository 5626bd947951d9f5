#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "groupvote/adversary.hpp"
#include "groupvote/harness.hpp"
#include "groupvote/objectives.hpp"

using namespace groupvote;

namespace {

// a@0, b@1; agents at 0, 1, 1; groups {0,1}, {2}
struct Small {
    Instance inst = Instance::on_line(std::vector<double>{0, 1, 1}, std::vector<double>{0, 1});
    Grouping grp{{{0, 1}, {2}}, 3};
};

// Definitions spelled out directly on the matrix.
double naive_max_of_avg(const Instance& inst, const Grouping& grp, std::size_t x) {
    double best = 0;
    for (const auto& g : grp) {
        double s = 0;
        for (auto i : g) s += inst.at(i, inst.alt_point(x));
        best = std::max(best, s / static_cast<double>(g.size()));
    }
    return best;
}

double naive_avg_of_max(const Instance& inst, const Grouping& grp, std::size_t x) {
    double s = 0;
    for (const auto& g : grp) {
        double mx = 0;
        for (auto i : g) mx = std::max(mx, inst.at(i, inst.alt_point(x)));
        s += mx;
    }
    return s / static_cast<double>(grp.size());
}

}  // namespace

TEST_CASE("hand-evaluated costs") {
    Small e;
    CHECK(max_of_avg(e.inst, e.grp, 0) == doctest::Approx(1.0));
    CHECK(max_of_avg(e.inst, e.grp, 1) == doctest::Approx(0.5));
    CHECK(avg_of_max(e.inst, e.grp, 0) == doctest::Approx(1.0));
    CHECK(avg_of_max(e.inst, e.grp, 1) == doctest::Approx(0.5));
    const OptimalAlternative opt = optimal_alternative(e.inst, e.grp, Objective::MaxOfAvg);
    CHECK(opt.alternative == 1);
    CHECK(opt.cost == doctest::Approx(0.5));
    CHECK_THROWS_AS(max_of_avg(e.inst, e.grp, 2), IndexError);
    CHECK_THROWS_AS(avg_of_max(e.inst, Grouping::single(4), 0), GroupingError);
}

TEST_CASE("colocated agents cost nothing") {
    const Instance inst = Instance::on_line(std::vector<double>{2, 2, 2}, std::vector<double>{0, 2});
    const Grouping grp({{0}, {1, 2}}, 3);
    CHECK(max_of_avg(inst, grp, 1) == 0.0);
    CHECK(avg_of_max(inst, grp, 1) == 0.0);
    CHECK(optimal_alternative(inst, grp, Objective::AvgOfMax).alternative == 1);
    CHECK(optimal_alternative(inst, grp, Objective::AvgOfMax).cost == 0.0);
}

TEST_CASE("singleton groups reduce to egalitarian and average cost") {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const RandomInstance ri = gen_random_euclidean(6, 3, 1, 2, seed, false);
        const Grouping single = Grouping::singletons(6);
        for (std::size_t x = 0; x < 3; ++x) {
            double mx = 0, sum = 0;
            for (std::size_t i = 0; i < 6; ++i) {
                mx = std::max(mx, ri.instance.agent_alt(i, x));
                sum += ri.instance.agent_alt(i, x);
            }
            CHECK(max_of_avg(ri.instance, single, x) == doctest::Approx(mx).epsilon(1e-12));
            CHECK(avg_of_max(ri.instance, single, x) == doctest::Approx(sum / 6).epsilon(1e-12));
        }
    }
}

TEST_CASE("costs agree with the definitions on random instances") {
    for (std::uint64_t seed = 0; seed < 300; ++seed) {
        const RandomInstance ri = gen_random_euclidean(3 + seed % 20, 2 + seed % 5, 1 + seed % 3, 1 + seed % 3,
                                                       seed, false);
        for (std::size_t x = 0; x < ri.instance.alternatives(); ++x) {
            CHECK(max_of_avg(ri.instance, ri.grouping, x) ==
                  doctest::Approx(naive_max_of_avg(ri.instance, ri.grouping, x)).epsilon(1e-12));
            CHECK(avg_of_max(ri.instance, ri.grouping, x) ==
                  doctest::Approx(naive_avg_of_max(ri.instance, ri.grouping, x)).epsilon(1e-12));
        }
    }
}

TEST_CASE("scale equivariance") {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const RandomInstance ri = gen_random_euclidean(9, 4, 3, 2, seed, true);
        for (double c : {0.5, 8.0}) {
            const Instance s = ri.instance.scaled(c);
            for (Objective obj : {Objective::MaxOfAvg, Objective::AvgOfMax}) {
                const CostProfile a = cost_profile(ri.instance, ri.grouping, obj);
                const CostProfile b = cost_profile(s, ri.grouping, obj);
                CHECK(a.argmin == b.argmin);
                for (std::size_t x = 0; x < 4; ++x) {
                    CHECK(b.costs[x] == doctest::Approx(c * a.costs[x]).epsilon(1e-12));
                    CHECK(distortion(s, ri.grouping, obj, x).ratio ==
                          doctest::Approx(distortion(ri.instance, ri.grouping, obj, x).ratio).epsilon(1e-12));
                }
            }
        }
    }
}

TEST_CASE("adding a colocated singleton group adds nothing to the per-group sum") {
    // agents at 0.2, 0.9 in one group; new agent placed on x = alternative 1 (at 0.5)
    const Instance before = Instance::on_line(std::vector<double>{0.2, 0.9}, std::vector<double>{0, 0.5});
    const Instance after = Instance::on_line(std::vector<double>{0.2, 0.9, 0.5}, std::vector<double>{0, 0.5});
    const double sum_before = avg_of_max(before, Grouping::single(2), 1) * 1;
    const double sum_after = avg_of_max(after, Grouping({{0, 1}, {2}}, 3), 1) * 2;
    CHECK(sum_after == doctest::Approx(sum_before));
}

TEST_CASE("distortion reports") {
    Small e;
    const DistortionReport r = distortion(e.inst, e.grp, Objective::MaxOfAvg, 0, "min-max");
    CHECK(r.winner == 0);
    CHECK(r.opt == 1);
    CHECK(r.winner_cost == doctest::Approx(1.0));
    CHECK(r.opt_cost == doctest::Approx(0.5));
    CHECK(r.ratio == doctest::Approx(2.0));
    CHECK_FALSE(r.unbounded);
    CHECK(r.mechanism == "min-max");

    CHECK(distortion(e.inst, e.grp, Objective::MaxOfAvg, 1).ratio == 1.0);

    // everything colocated: 0/0 = 1
    const Instance zero = Instance::on_line(std::vector<double>{1, 1}, std::vector<double>{1, 1});
    CHECK(distortion(zero, Grouping::single(2), Objective::AvgOfMax, 1).ratio == 1.0);

    // positive over zero
    const Instance inf = Instance::on_line(std::vector<double>{1, 1}, std::vector<double>{1, 2});
    const DistortionReport u = distortion(inf, Grouping::single(2), Objective::AvgOfMax, 1);
    CHECK(u.unbounded);
    CHECK(std::isinf(u.ratio));
    CHECK(distortion_ratio(0, 0) == 1.0);
}

TEST_CASE("lower-bound layouts evaluated by hand") {
    SUBCASE("full-maxavg lambda=4: cost(a)=3, cost(b)=1+2/lambda") {
        const LowerBoundInstance lb = gen_full_maxavg(4);
        CHECK(max_of_avg(lb.inst, lb.grp, 0) == doctest::Approx(3.0));
        CHECK(max_of_avg(lb.inst, lb.grp, 1) == doctest::Approx(1.5));
        const OptimalAlternative opt = optimal_alternative(lb.inst, lb.grp, Objective::MaxOfAvg);
        CHECK(opt.alternative == 1);
        CHECK(opt.cost == doctest::Approx(1.5));
    }
    SUBCASE("full-avgmax-asym k=3: cost(a)=1, cost(b)=1/k, ratio k") {
        const LowerBoundInstance lb = gen_full_avgmax_asym(3);
        CHECK(avg_of_max(lb.inst, lb.grp, 0) == doctest::Approx(1.0));
        CHECK(avg_of_max(lb.inst, lb.grp, 1) == doctest::Approx(1.0 / 3.0));
        CHECK(distortion(lb.inst, lb.grp, Objective::AvgOfMax, 0).ratio == doctest::Approx(3.0));
    }
}
