// One line per acceptance criterion: PASS/FAIL, name, detail. Exit status is
// non-zero when any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "groupvote/adversary.hpp"
#include "groupvote/cli.hpp"
#include "groupvote/harness.hpp"
#include "groupvote/matching.hpp"
#include "groupvote/mechanisms.hpp"
#include "groupvote/objectives.hpp"
#include "groupvote/rng.hpp"

using namespace groupvote;

namespace {

int failures = 0;

void report(bool ok, const std::string& name, const std::string& detail) {
    std::cout << (ok ? "PASS " : "FAIL ") << name << ": " << detail << std::endl;
    if (!ok) ++failures;
}

// Runs body; exceptions count as failure with their message.
void criterion(const std::string& name, const std::function<std::string(bool&)>& body) {
    bool ok = true;
    std::string detail;
    try {
        detail = body(ok);
    } catch (const std::exception& e) {
        ok = false;
        detail = std::string("exception: ") + e.what();
    }
    report(ok, name, detail);
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// ---------------------------------------------------------------------------

void lower_bounds() {
    struct Case {
        Family family;
        FamilyParams params;
        double expected;
        const char* label;
    };
    const std::vector<Case> cases = {
        {Family::FullMaxAvg, {100, {}, {}}, 300.0 / 102.0, "full-maxavg lambda=100 -> 300/102"},
        {Family::FullMaxAvg, {4, {}, {}}, 2.0, "full-maxavg lambda=4 -> 2"},
        {Family::FullAvgMaxSym, {100, {}, {}}, 301.0 / 103.0, "full-avgmax-sym lambda=100 -> 301/103"},
        {Family::FullAvgMaxSym, {5, {}, {}}, 2.0, "full-avgmax-sym lambda=5 -> 2"},
        {Family::FullAvgMaxAsym, {{}, 10, {}}, 10.0, "full-avgmax-asym k=10 -> 10"},
        {Family::OrdMaxAvg, {99, {}, {}}, 4.96, "ord-maxavg lambda=99 -> 4.96"},
        {Family::OrdAvgMaxSym, {41, {}, 0.1}, 203.0 / 41.41, "ord-avgmax-sym lambda=41 eps=0.1 -> 203/41.41"},
        {Family::OrdAvgMaxAsym, {{}, 10, {}}, 21.0, "ord-avgmax-asym k=10 -> 21"},
    };
    for (const auto& c : cases) {
        criterion(std::string("lower-bound ") + c.label, [&](bool& ok) {
            const auto t0 = std::chrono::steady_clock::now();
            const LowerBoundInstance lb = make_lower_bound(c.family, c.params);
            const DistortionReport rep = distortion(lb.inst, lb.grp, lb.objective, lb.adversarial_winner);
            const double secs = seconds_since(t0);
            ok = std::fabs(rep.ratio - c.expected) <= 1e-9 && secs < 1.0;
            return "ratio " + fmt(rep.ratio) + " expected " + fmt(c.expected) + " in " + fmt(secs) + " s";
        });
    }
}

// ---------------------------------------------------------------------------

struct PropertyCounters {
    std::size_t checks = 0;
    std::size_t violations = 0;
    std::string first;
};

void check_bound(PropertyCounters& pc, double ratio, double bound, const std::string& what) {
    ++pc.checks;
    if (!(ratio <= bound + 1e-9)) {
        if (pc.violations++ == 0) pc.first = what + " ratio " + fmt(ratio) + " > " + fmt(bound);
    }
}

void property_suite() {
    constexpr std::size_t kInstances = 10000;
    constexpr std::uint64_t kSeed = 20240611;
    PropertyCounters min_total, min_max, matching, pveto, top, lemma, virt;
    std::size_t symmetric_seen = 0;

    const auto t0 = std::chrono::steady_clock::now();
    for (std::size_t trial = 0; trial < kInstances; ++trial) {
        Rng rng(derive_seed(kSeed, trial));
        const bool symmetric = trial % 2 == 0;
        std::size_t n, k;
        if (symmetric) {
            k = static_cast<std::size_t>(rng.between(1, 5));
            const std::size_t lambda = static_cast<std::size_t>(rng.between(1, static_cast<std::int64_t>(30 / k)));
            n = k * lambda;
        } else {
            n = static_cast<std::size_t>(rng.between(1, 30));
            k = static_cast<std::size_t>(rng.between(1, static_cast<std::int64_t>(std::min<std::size_t>(5, n))));
        }
        const auto m = static_cast<std::size_t>(rng.between(2, 6));
        const auto dim = static_cast<std::size_t>(rng.between(1, 3));
        const RandomInstance ri = gen_random_euclidean(n, m, k, dim, rng.next(), symmetric);
        const Instance& inst = ri.instance;
        const Grouping& grp = ri.grouping;
        const bool sym = grp.symmetric();
        symmetric_seen += sym ? 1 : 0;
        const std::string tag = "trial " + std::to_string(trial);

        auto ratio = [&](MechanismId id, Objective obj) {
            return distortion(inst, grp, obj, select_winner(id, inst, grp)).ratio;
        };
        const double mu = static_cast<double>(grp.smallest_group());
        const double kk = static_cast<double>(grp.size());

        check_bound(min_total, ratio(MechanismId::MinTotal, Objective::MaxOfAvg), 3.0 - 2.0 * mu / n,
                    tag + " min-total max-of-avg");
        if (sym) check_bound(min_total, ratio(MechanismId::MinTotal, Objective::AvgOfMax), 3.0, tag + " min-total");
        check_bound(min_max, ratio(MechanismId::MinMax, Objective::AvgOfMax), kk, tag + " min-max");
        check_bound(matching, ratio(MechanismId::Matching, Objective::MaxOfAvg), 5.0, tag + " matching");
        if (sym) check_bound(matching, ratio(MechanismId::Matching, Objective::AvgOfMax), 5.0, tag + " matching");
        check_bound(pveto, ratio(MechanismId::PluralityVeto, Objective::MaxOfAvg), 5.0, tag + " plurality-veto");
        if (sym) {
            check_bound(pveto, ratio(MechanismId::PluralityVeto, Objective::AvgOfMax), 5.0, tag + " plurality-veto");
        }
        check_bound(top, ratio(MechanismId::TopChoice, Objective::AvgOfMax), 2.0 * kk + 1.0, tag + " top-choice");
        check_bound(virt, ratio(MechanismId::VirtualMma, Objective::MaxOfAvg), 3.0, tag + " virtual-mma");
        check_bound(virt, ratio(MechanismId::VirtualVam, Objective::AvgOfMax), 3.0, tag + " virtual-vam");

        const OrdinalProfile profile = ordinal_profile_from_instance(inst);
        for (std::size_t x = 0; x < m; ++x) {
            if (!has_perfect_matching(domination_graph(profile, x))) continue;
            for (std::size_t y = 0; y < m; ++y) {
                ++lemma.checks;
                if (!lemma_distance_bound_holds(inst, grp, x, y) && lemma.violations++ == 0) {
                    lemma.first = tag + " x=" + std::to_string(x) + " y=" + std::to_string(y);
                }
            }
        }
    }
    const double secs = seconds_since(t0);

    auto emit = [&](const std::string& name, const PropertyCounters& pc) {
        report(pc.violations == 0 && pc.checks > 0, "property " + name,
               std::to_string(pc.checks) + " checks, " + std::to_string(pc.violations) + " violations" +
                   (pc.violations ? " (first: " + pc.first + ")" : ""));
    };
    emit("min-total: max-of-avg <= 3-2mu/n, avg-of-max <= 3 (symmetric)", min_total);
    emit("min-max: avg-of-max <= k", min_max);
    emit("matching: max-of-avg <= 5, avg-of-max <= 5 (symmetric)", matching);
    emit("plurality-veto: max-of-avg <= 5, avg-of-max <= 5 (symmetric)", pveto);
    emit("top-choice: avg-of-max <= 2k+1", top);
    emit("matching-distance lemma for every PM alternative x and every y", lemma);
    emit("virtual mechanisms <= 3", virt);
    report(symmetric_seen >= kInstances / 2, "property suite coverage",
           std::to_string(kInstances) + " instances (" + std::to_string(symmetric_seen) + " symmetric) in " +
               fmt(secs) + " s");
}

// ---------------------------------------------------------------------------

void adversary_checks() {
    criterion("worst_grouping recovers k on the asymmetric full-information metric (k=3..6)", [](bool& ok) {
        std::string detail;
        for (std::size_t k = 3; k <= 6; ++k) {
            const LowerBoundInstance lb = gen_full_avgmax_asym(k);
            const WorstGrouping wg = worst_grouping(lb.inst, k, Objective::AvgOfMax, 0, false);
            const bool hit = std::fabs(wg.ratio - static_cast<double>(k)) <= 1e-9;
            ok = ok && hit;
            detail += "k=" + std::to_string(k) + ":" + fmt(wg.ratio) + " ";
        }
        return detail;
    });

    criterion("lp_worst_metric on ord-avgmax-asym returns 2k+1 and its witness replays (k=2..4)", [](bool& ok) {
        std::string detail;
        for (std::size_t k = 2; k <= 4; ++k) {
            const LowerBoundInstance lb = gen_ordinal_avgmax_asym(k);
            const OrdinalProfile profile = ordinal_profile_from_instance(lb.inst);
            const LpAudit audit = lp_worst_metric(profile, lb.grp, 0, Objective::AvgOfMax);
            const double target = 2.0 * static_cast<double>(k) + 1.0;
            bool hit = !audit.unbounded && std::fabs(audit.ratio - target) <= 1e-6 && audit.witness.has_value();
            if (hit) {
                const double replay = distortion(*audit.witness, lb.grp, Objective::AvgOfMax, 0).ratio;
                hit = std::fabs(replay - audit.ratio) <= 1e-6 && profile_consistent(*audit.witness, profile, 1e-6);
                detail += "k=" + std::to_string(k) + ":" + fmt(audit.ratio) + " replay " + fmt(replay) + " ";
            } else {
                detail += "k=" + std::to_string(k) + ":" + fmt(audit.ratio) + " ";
            }
            ok = ok && hit;
        }
        return detail;
    });

    criterion("LP audit of gpm / group-score winners never exceeds 3 (m=2, n<=8, k<=3)", [](bool& ok) {
        constexpr std::size_t kCases = 150;
        double worst_gpm = 1, worst_gs = 1;
        for (std::size_t c = 0; c < kCases; ++c) {
            Rng rng(derive_seed(777, c));
            const auto n = static_cast<std::size_t>(rng.between(1, 8));
            const auto k = static_cast<std::size_t>(rng.between(1, static_cast<std::int64_t>(std::min<std::size_t>(3, n))));
            std::vector<std::vector<std::size_t>> rankings(n);
            for (auto& r : rankings) r = rng.below(std::uint64_t{2}) ? std::vector<std::size_t>{0, 1} : std::vector<std::size_t>{1, 0};
            const OrdinalProfile profile(2, rankings);
            // Random grouping: shuffle agents, cut into k non-empty blocks.
            std::vector<std::size_t> perm(n);
            for (std::size_t i = 0; i < n; ++i) perm[i] = i;
            rng.shuffle(perm);
            std::vector<std::size_t> cuts;
            std::vector<std::size_t> slots(n - 1);
            for (std::size_t i = 0; i + 1 < n; ++i) slots[i] = i + 1;
            rng.shuffle(slots);
            cuts.assign(slots.begin(), slots.begin() + static_cast<std::ptrdiff_t>(k - 1));
            std::sort(cuts.begin(), cuts.end());
            cuts.push_back(n);
            std::vector<std::vector<std::size_t>> groups;
            std::size_t start = 0;
            for (std::size_t cut : cuts) {
                groups.emplace_back(perm.begin() + static_cast<std::ptrdiff_t>(start),
                                    perm.begin() + static_cast<std::ptrdiff_t>(cut));
                std::sort(groups.back().begin(), groups.back().end());
                start = cut;
            }
            const Grouping grp(groups, n);
            const GroupAwareOrdinal in{profile, grp};
            const std::size_t w_gpm = group_proportional_majority(in);
            const std::size_t w_gs = group_score(in);
            const LpAudit a = lp_worst_metric(profile, grp, w_gpm, Objective::MaxOfAvg);
            const LpAudit b = lp_worst_metric(profile, grp, w_gs, Objective::AvgOfMax);
            worst_gpm = std::max(worst_gpm, a.ratio);
            worst_gs = std::max(worst_gs, b.ratio);
        }
        ok = worst_gpm <= 3.0 + 1e-6 && worst_gs <= 3.0 + 1e-6;
        return std::to_string(kCases) + " profiles; worst gpm " + fmt(worst_gpm) + ", worst group-score " +
               fmt(worst_gs);
    });

    criterion("grid <= LP + 1e-6 on 100 tiny inputs", [](bool& ok) {
        double max_gap = -1e300;
        std::size_t cases = 0;
        for (std::size_t c = 0; c < 100; ++c) {
            Rng rng(derive_seed(4242, c));
            const auto n = static_cast<std::size_t>(rng.between(1, 4));
            const auto m = static_cast<std::size_t>(rng.between(2, 3));
            const auto k = static_cast<std::size_t>(rng.between(1, static_cast<std::int64_t>(std::min<std::size_t>(2, n))));
            const RandomInstance ri = gen_random_euclidean(n, m, k, 1, rng.next(), false);
            const OrdinalProfile profile = ordinal_profile_from_instance(ri.instance);
            const Objective obj = c % 2 ? Objective::AvgOfMax : Objective::MaxOfAvg;
            const auto winner = static_cast<std::size_t>(rng.below(std::uint64_t{m}));
            const LpAudit lp = lp_worst_metric(profile, ri.grouping, winner, obj);
            const GridAudit grid = grid_worst_metric(profile, ri.grouping, winner, obj, 1.0, 4.0);
            ++cases;
            if (lp.unbounded) continue;
            max_gap = std::max(max_gap, grid.ratio - lp.ratio);
            if (grid.ratio > lp.ratio + 1e-6) ok = false;
        }
        return std::to_string(cases) + " inputs; max(grid - lp) " + fmt(max_gap);
    });

    criterion("grid equals LP on integer-position families (ord-avgmax-asym k=2,3)", [](bool& ok) {
        std::string detail;
        for (std::size_t k = 2; k <= 3; ++k) {
            const LowerBoundInstance lb = gen_ordinal_avgmax_asym(k);
            const OrdinalProfile profile = ordinal_profile_from_instance(lb.inst);
            const LpAudit lp = lp_worst_metric(profile, lb.grp, 0, Objective::AvgOfMax);
            const GridAudit grid = grid_worst_metric(profile, lb.grp, 0, Objective::AvgOfMax, 1.0, 4.0);
            ok = ok && std::fabs(grid.ratio - lp.ratio) <= 1e-6;
            detail += "k=" + std::to_string(k) + ": grid " + fmt(grid.ratio) + " lp " + fmt(lp.ratio) + " ";
        }
        return detail;
    });
}

// ---------------------------------------------------------------------------

std::string slurp(const std::filesystem::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::ostringstream os;
    os << f.rdbuf();
    return os.str();
}

void determinism() {
    criterion("repeated sweep runs produce byte-identical CSV", [](bool& ok) {
        const auto dir = std::filesystem::temp_directory_path() / "groupvote_acceptance";
        std::filesystem::create_directories(dir);
        std::vector<std::string> outputs;
        for (const char* threads : {"1", "1", "3"}) {
            const auto csv = dir / (std::string("sweep_") + std::to_string(outputs.size()) + ".csv");
            std::ostringstream out, err;
            const int code = run_cli({"sweep", "--seed", "99", "--trials", "300", "--mechanism",
                                      "min-total,matching,plurality-veto", "--objective", "max-of-avg", "--threads",
                                      threads, "--output", csv.string()},
                                     out, err);
            if (code != 0) {
                ok = false;
                return "sweep exited " + std::to_string(code) + ": " + err.str();
            }
            outputs.push_back(slurp(csv));
        }
        ok = !outputs[0].empty() && outputs[0] == outputs[1] && outputs[0] == outputs[2];
        std::filesystem::remove_all(dir);
        return std::to_string(outputs[0].size()) + " bytes; serial x2 and 3 threads " +
               (ok ? "identical" : "differ");
    });
}

}  // namespace

int main() {
    lower_bounds();
    property_suite();
    adversary_checks();
    determinism();
    std::cout << (failures == 0 ? "ALL PASS" : std::to_string(failures) + " FAILED") << std::endl;
    return failures == 0 ? 0 : 1;
}
