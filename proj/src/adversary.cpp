#include "groupvote/adversary.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <string>

#include "groupvote/objectives.hpp"
#include "groupvote/partitions.hpp"
#include "groupvote/simplex.hpp"

namespace groupvote {

namespace {

// Costs of every alternative for a grouping given as block labels, reading
// agent-alternative distances from a dense n x m table.
class LabelledCosts {
public:
    LabelledCosts(std::size_t n, std::size_t m, std::size_t k, Objective obj)
        : n_(n), m_(m), k_(k), obj_(obj), sum_(k), far_(k), count_(k) {}

    double cost(const std::vector<double>& table, const std::vector<std::size_t>& labels, std::size_t x) {
        std::fill(sum_.begin(), sum_.end(), 0.0);
        std::fill(far_.begin(), far_.end(), 0.0);
        std::fill(count_.begin(), count_.end(), 0);
        for (std::size_t i = 0; i < n_; ++i) {
            const double d = table[i * m_ + x];
            const std::size_t g = labels[i];
            sum_[g] += d;
            far_[g] = std::max(far_[g], d);
            ++count_[g];
        }
        if (obj_ == Objective::MaxOfAvg) {
            double worst = 0;
            for (std::size_t g = 0; g < k_; ++g) worst = std::max(worst, sum_[g] / static_cast<double>(count_[g]));
            return worst;
        }
        double total = 0;
        for (std::size_t g = 0; g < k_; ++g) total += far_[g];
        return total / static_cast<double>(k_);
    }

    double ratio(const std::vector<double>& table, const std::vector<std::size_t>& labels, std::size_t winner) {
        const double w = cost(table, labels, winner);
        double best = w;
        for (std::size_t x = 0; x < m_; ++x) {
            if (x != winner) best = std::min(best, cost(table, labels, x));
        }
        return distortion_ratio(w, best);
    }

private:
    std::size_t n_, m_, k_;
    Objective obj_;
    std::vector<double> sum_;
    std::vector<double> far_;
    std::vector<std::size_t> count_;
};

bool close_enough(double a, double b, double tol) {
    if (std::isinf(a) || std::isinf(b)) return a == b;
    return std::abs(a - b) <= tol * std::max(1.0, std::abs(b));
}

// ---------------------------------------------------------------------------
// LP over metric completions.
//
// Variables: one distance per unordered pair of points (agents first, then
// alternatives), optionally followed by a homogenising variable t when
// alternative distances are pinned, followed by per-group epigraph variables
// for the Avg-of-Max normalisation.
class MetricProgram {
public:
    MetricProgram(const OrdinalProfile& profile, const Grouping& grp, Objective obj,
                  const std::vector<double>* pinned)
        : profile_(profile),
          grp_(grp),
          obj_(obj),
          pinned_(pinned),
          n_(profile.agents()),
          m_(profile.alternatives()),
          points_(n_ + m_),
          pairs_(points_ * (points_ - 1) / 2),
          t_var_(pinned ? pairs_ : kNone),
          epi_base_(pairs_ + (pinned ? 1 : 0)),
          variables_(epi_base_ + (obj == Objective::AvgOfMax ? grp.size() : 0)),
          base_(variables_) {
        build_base();
    }

    std::size_t pair(std::size_t p, std::size_t q) const {
        if (p > q) std::swap(p, q);
        return p * points_ - p * (p + 1) / 2 + (q - p - 1);
    }
    std::size_t agent_alt(std::size_t i, std::size_t x) const { return pair(i, n_ + x); }
    std::size_t t_var() const { return t_var_; }
    std::size_t variables() const { return variables_; }

    // Homogeneous constraints plus pins and the normalisation cost(o) <= 1.
    lp::LinearProgram with_normalisation(std::size_t o) const {
        lp::LinearProgram lp = base_;
        if (obj_ == Objective::MaxOfAvg) {
            for (const auto& group : grp_) {
                std::vector<lp::LinearProgram::Term> terms;
                const double w = 1.0 / static_cast<double>(group.size());
                for (std::size_t i : group) terms.emplace_back(agent_alt(i, o), w);
                lp.add_le(std::move(terms), 1.0);
            }
        } else {
            std::vector<lp::LinearProgram::Term> avg;
            for (std::size_t g = 0; g < grp_.size(); ++g) {
                const std::size_t u = epi_base_ + g;
                for (std::size_t i : grp_[g]) lp.add_le({{agent_alt(i, o), 1.0}, {u, -1.0}}, 0.0);
                avg.emplace_back(u, 1.0 / static_cast<double>(grp_.size()));
            }
            lp.add_le(std::move(avg), 1.0);
        }
        return lp;
    }

    // Distances from an LP point; divides by t when pinned.
    Instance witness(const std::vector<double>& x, double t) const {
        std::vector<double> flat(points_ * points_, 0.0);
        for (std::size_t p = 0; p < points_; ++p) {
            for (std::size_t q = p + 1; q < points_; ++q) {
                double d = x[pair(p, q)] / t;
                if (pinned_ && p >= n_) d = (*pinned_)[(p - n_) * m_ + (q - n_)];
                flat[p * points_ + q] = d;
                flat[q * points_ + p] = d;
            }
        }
        return Instance(n_, m_, std::move(flat));
    }

private:
    static constexpr std::size_t kNone = static_cast<std::size_t>(-1);

    void build_base() {
        // Triangle inequalities d(p,q) <= d(p,r) + d(r,q).
        for (std::size_t p = 0; p < points_; ++p) {
            for (std::size_t q = p + 1; q < points_; ++q) {
                for (std::size_t r = 0; r < points_; ++r) {
                    if (r == p || r == q) continue;
                    base_.add_le({{pair(p, q), 1.0}, {pair(p, r), -1.0}, {pair(r, q), -1.0}}, 0.0);
                }
            }
        }
        // Weak consistency with each ranking.
        for (std::size_t i = 0; i < n_; ++i) {
            const auto& r = profile_.ranking(i);
            for (std::size_t t = 0; t + 1 < m_; ++t) {
                base_.add_le({{agent_alt(i, r[t]), 1.0}, {agent_alt(i, r[t + 1]), -1.0}}, 0.0);
            }
        }
        if (pinned_) {
            for (std::size_t x = 0; x < m_; ++x) {
                for (std::size_t y = x + 1; y < m_; ++y) {
                    base_.add_eq({{pair(n_ + x, n_ + y), 1.0}, {t_var_, -(*pinned_)[x * m_ + y]}}, 0.0);
                }
            }
        }
    }

    const OrdinalProfile& profile_;
    const Grouping& grp_;
    Objective obj_;
    const std::vector<double>* pinned_;
    std::size_t n_, m_, points_, pairs_, t_var_, epi_base_, variables_;
    lp::LinearProgram base_;
};

// Calls f(selection) for each choice of one agent per group.
template <typename F>
bool for_each_selection(const Grouping& grp, F&& f) {
    std::vector<std::size_t> pick(grp.size(), 0);
    std::vector<std::size_t> chosen(grp.size());
    while (true) {
        for (std::size_t g = 0; g < grp.size(); ++g) chosen[g] = grp[g][pick[g]];
        if (!f(chosen)) return false;
        std::size_t g = 0;
        while (g < grp.size() && ++pick[g] == grp[g].size()) pick[g++] = 0;
        if (g == grp.size()) return true;
    }
}

}  // namespace

WorstGrouping worst_grouping(const Instance& inst, std::size_t k, Objective obj, std::size_t winner,
                             bool symmetric_only, std::size_t max_agents) {
    const std::size_t n = inst.agents();
    const std::size_t m = inst.alternatives();
    if (winner >= m) throw IndexError("winner out of range");
    if (k < 1 || k > n) throw PreconditionError("need 1 <= k <= n");
    if (symmetric_only && n % k != 0) throw PreconditionError("symmetric groupings need k to divide n");
    if (n > max_agents) {
        throw BudgetExceeded("worst_grouping enumerates all partitions; n = " + std::to_string(n) +
                             " exceeds the budget of " + std::to_string(max_agents) + " agents");
    }

    std::vector<double> table(n * m);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t x = 0; x < m; ++x) table[i * m + x] = inst.agent_alt(i, x);
    }
    LabelledCosts costs(n, m, k, obj);
    double best = -1;
    std::vector<std::size_t> best_labels;
    auto visit = [&](const std::vector<std::size_t>& labels) {
        const double r = costs.ratio(table, labels, winner);
        if (r > best) {
            best = r;
            best_labels = labels;
        }
        return true;
    };
    const std::uint64_t count =
        symmetric_only ? for_each_equal_partition(n, k, visit) : for_each_set_partition(n, k, visit);
    return {Grouping(blocks_from_labels(best_labels, k), n), best, count};
}

LpAudit lp_worst_metric(const OrdinalProfile& profile, const Grouping& grp, std::size_t winner, Objective obj,
                        const std::vector<double>* pinned_alt_dists, const LpAuditOptions& options) {
    const std::size_t n = profile.agents();
    const std::size_t m = profile.alternatives();
    if (grp.agents() != n) throw GroupingError("grouping and profile disagree on the number of agents");
    if (winner >= m) throw IndexError("winner out of range");
    if (n + m > options.max_points) {
        throw BudgetExceeded("LP audit limited to " + std::to_string(options.max_points) + " points, got " +
                             std::to_string(n + m));
    }
    if (pinned_alt_dists) {
        const ValidationResult v = validate_square_metric(*pinned_alt_dists, m);
        if (!v.ok()) throw MetricError("pinned alternative distances are not a metric: " + describe(v.violations.front()));
    }

    std::uint64_t selections = 1;
    if (obj == Objective::MaxOfAvg) {
        selections = grp.size();
    } else {
        for (const auto& group : grp) {
            if (selections > options.max_programs / group.size() + 1) {
                selections = options.max_programs + 1;
                break;
            }
            selections *= group.size();
        }
    }
    if (selections * m > options.max_programs) {
        throw BudgetExceeded("LP audit would solve more than " + std::to_string(options.max_programs) + " programs");
    }

    MetricProgram program(profile, grp, obj, pinned_alt_dists);
    LpAudit out;
    out.ratio = -1;
    std::vector<double> best_x;

    auto consider = [&](std::size_t o, const lp::LinearProgram& lp) {
        const lp::Solution sol = lp::solve(lp);
        ++out.programs;
        if (sol.status == lp::Status::Infeasible) {
            throw InvariantViolation("metric LP infeasible; profile inconsistent with pinned alternative distances");
        }
        if (sol.status == lp::Status::Unbounded) {
            out.unbounded = true;
            out.ratio = std::numeric_limits<double>::infinity();
            out.worst_alternative = o;
            return false;
        }
        if (sol.value > out.ratio) {
            out.ratio = sol.value;
            out.worst_alternative = o;
            best_x = sol.x;
        }
        return true;
    };

    for (std::size_t o = 0; o < m && !out.unbounded; ++o) {
        const lp::LinearProgram normalised = program.with_normalisation(o);
        if (obj == Objective::MaxOfAvg) {
            for (const auto& group : grp) {
                lp::LinearProgram lp = normalised;
                std::vector<lp::LinearProgram::Term> terms;
                const double w = 1.0 / static_cast<double>(group.size());
                for (std::size_t i : group) terms.emplace_back(program.agent_alt(i, winner), w);
                lp.set_objective(std::move(terms));
                if (!consider(o, lp)) break;
            }
        } else {
            const double w = 1.0 / static_cast<double>(grp.size());
            for_each_selection(grp, [&](const std::vector<std::size_t>& chosen) {
                lp::LinearProgram lp = normalised;
                std::vector<lp::LinearProgram::Term> terms;
                for (std::size_t i : chosen) terms.emplace_back(program.agent_alt(i, winner), w);
                lp.set_objective(std::move(terms));
                return consider(o, lp);
            });
        }
    }
    if (out.unbounded) return out;

    double t = 1.0;
    if (pinned_alt_dists) {
        t = best_x[program.t_var()];
        if (t <= 1e-9) {
            // Only a ratio of at most 1 can sit at t = 0 (all alternatives
            // collapse), so any feasible completion is a witness.
            lp::LinearProgram feas = program.with_normalisation(winner);
            feas.add_le({{program.t_var(), 1.0}}, 1.0);
            feas.set_objective({{program.t_var(), 1.0}});
            const lp::Solution sol = lp::solve(feas);
            if (sol.status != lp::Status::Optimal || sol.value <= 1e-9) {
                throw InvariantViolation("no metric completion with positive scale matches the pinned distances");
            }
            best_x = sol.x;
            t = sol.value;
        }
    }
    out.ratio = std::max(out.ratio, 1.0);
    Instance witness = program.witness(best_x, t);
    const ValidationResult v = validate_instance(witness, 1e-6);
    if (!v.ok()) throw InvariantViolation("LP witness is not a metric: " + describe(v.violations.front()));
    if (!profile_consistent(witness, profile, 1e-6)) {
        throw InvariantViolation("LP witness is inconsistent with the profile");
    }
    const double replay = distortion(witness, grp, obj, winner).ratio;
    if (!close_enough(replay, out.ratio, 1e-6)) {
        throw InvariantViolation("LP witness evaluates to ratio " + std::to_string(replay) + " but the LP claims " +
                                 std::to_string(out.ratio));
    }
    out.witness = std::move(witness);
    return out;
}

GridAudit grid_worst_metric(const OrdinalProfile& profile, const Grouping& grp, std::size_t winner, Objective obj,
                            double grid_step, double span, const GridAuditOptions& options) {
    const std::size_t n = profile.agents();
    const std::size_t m = profile.alternatives();
    if (grp.agents() != n) throw GroupingError("grouping and profile disagree on the number of agents");
    if (winner >= m) throw IndexError("winner out of range");
    if (!(grid_step > 0) || !(span >= 0)) throw PreconditionError("grid step must be positive and span non-negative");
    if (n + m > options.max_points) {
        throw BudgetExceeded("grid audit limited to " + std::to_string(options.max_points) + " points, got " +
                             std::to_string(n + m));
    }
    const auto cells = static_cast<std::int64_t>(std::floor(span / grid_step + 1e-9)) + 1;

    // Work in integer grid units; the ratio is scale-free.
    std::vector<std::int64_t> alt_pos(m, 0);
    std::vector<std::vector<std::int64_t>> feasible(n);
    std::vector<double> table(n * m);
    std::vector<std::size_t> labels(n);
    for (std::size_t g = 0; g < grp.size(); ++g) {
        for (std::size_t i : grp[g]) labels[i] = g;
    }
    LabelledCosts costs(n, m, grp.size(), obj);

    auto agent_options = [&](std::size_t i, std::vector<std::int64_t>& out) {
        out.clear();
        const auto& r = profile.ranking(i);
        for (std::int64_t p = 0; p < cells; ++p) {
            bool ok = true;
            for (std::size_t t = 0; t + 1 < m && ok; ++t) {
                ok = std::llabs(p - alt_pos[r[t]]) <= std::llabs(p - alt_pos[r[t + 1]]);
            }
            if (ok) out.push_back(p);
        }
    };

    // Visits every alternative placement; returns false if the callback stops.
    auto for_each_alt_placement = [&](auto&& f) {
        std::fill(alt_pos.begin(), alt_pos.end(), 0);
        while (true) {
            f();
            std::size_t x = 0;
            while (x < m && ++alt_pos[x] == cells) alt_pos[x++] = 0;
            if (x == m) return;
        }
    };

    // Budget check before doing any real work.
    long double planned = 0;
    for_each_alt_placement([&] {
        long double product = 1;
        for (std::size_t i = 0; i < n; ++i) {
            agent_options(i, feasible[i]);
            product *= static_cast<long double>(feasible[i].size());
        }
        planned += product;
    });
    if (planned > static_cast<long double>(options.max_placements)) {
        throw BudgetExceeded("grid audit would evaluate more than " + std::to_string(options.max_placements) +
                             " placements");
    }

    GridAudit out;
    out.ratio = -1;
    std::vector<std::int64_t> best_agents;
    std::vector<std::int64_t> best_alts;
    std::vector<std::size_t> pick(n);
    for_each_alt_placement([&] {
        for (std::size_t i = 0; i < n; ++i) {
            agent_options(i, feasible[i]);
            if (feasible[i].empty()) return;
        }
        std::fill(pick.begin(), pick.end(), 0);
        while (true) {
            for (std::size_t i = 0; i < n; ++i) {
                const std::int64_t p = feasible[i][pick[i]];
                for (std::size_t x = 0; x < m; ++x) table[i * m + x] = static_cast<double>(std::llabs(p - alt_pos[x]));
            }
            ++out.placements;
            const double r = costs.ratio(table, labels, winner);
            if (r > out.ratio) {
                out.ratio = r;
                best_alts = alt_pos;
                best_agents.resize(n);
                for (std::size_t i = 0; i < n; ++i) best_agents[i] = feasible[i][pick[i]];
            }
            std::size_t i = 0;
            while (i < n && ++pick[i] == feasible[i].size()) pick[i++] = 0;
            if (i == n) break;
        }
    });

    if (out.placements == 0) {
        out.ratio = 1;
        return out;
    }
    std::vector<double> agents(n), alts(m);
    for (std::size_t i = 0; i < n; ++i) agents[i] = static_cast<double>(best_agents[i]) * grid_step;
    for (std::size_t x = 0; x < m; ++x) alts[x] = static_cast<double>(best_alts[x]) * grid_step;
    out.witness = Instance::on_line(agents, alts);
    return out;
}

}  // namespace groupvote
