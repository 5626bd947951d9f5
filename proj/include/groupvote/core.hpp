#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "groupvote/errors.hpp"

namespace groupvote {

inline constexpr double kDefaultMetricTolerance = 1e-9;

/// A finite metric over agents and alternatives, stored as a dense
/// (n+m) x (n+m) matrix. Points 0..n-1 are agents, n..n+m-1 are alternatives.
///
/// The constructor checks shape only. Metric axioms are checked separately by
/// validate_instance so that violations can be reported instead of thrown.
class Instance {
public:
    Instance(std::size_t n, std::size_t m, std::vector<double> flat_dist);
    Instance(std::size_t n, std::size_t m, const std::vector<std::vector<double>>& rows);

    std::size_t agents() const noexcept { return n_; }
    std::size_t alternatives() const noexcept { return m_; }
    std::size_t points() const noexcept { return n_ + m_; }

    // Raw point-to-point distance; indices are matrix indices.
    double at(std::size_t p, std::size_t q) const noexcept { return dist_[p * points() + q]; }

    double agent_alt(std::size_t agent, std::size_t alt) const noexcept { return at(agent, n_ + alt); }
    double alt_alt(std::size_t x, std::size_t y) const noexcept { return at(n_ + x, n_ + y); }
    double agent_agent(std::size_t i, std::size_t j) const noexcept { return at(i, j); }

    std::size_t alt_point(std::size_t alt) const noexcept { return n_ + alt; }

    std::span<const double> row(std::size_t p) const noexcept {
        return {dist_.data() + p * points(), points()};
    }
    const std::vector<double>& flat() const noexcept { return dist_; }

    // Every distance multiplied by c (c > 0).
    Instance scaled(double c) const;

    // Builds the metric induced by points on the real line.
    static Instance on_line(std::span<const double> agent_positions, std::span<const double> alt_positions);

    friend bool operator==(const Instance&, const Instance&) = default;

private:
    std::size_t n_;
    std::size_t m_;
    std::vector<double> dist_;
};

/// Partition of agents 0..n-1 into k non-empty disjoint groups.
class Grouping {
public:
    // Throws GroupingError unless the groups partition {0..n-1} exactly.
    Grouping(std::vector<std::vector<std::size_t>> groups, std::size_t n);

    static Grouping singletons(std::size_t n);
    static Grouping single(std::size_t n);

    std::size_t agents() const noexcept { return group_of_.size(); }
    std::size_t size() const noexcept { return groups_.size(); }
    const std::vector<std::size_t>& operator[](std::size_t g) const { return groups_[g]; }
    const std::vector<std::vector<std::size_t>>& groups() const noexcept { return groups_; }
    std::size_t group_of(std::size_t agent) const { return group_of_.at(agent); }

    std::size_t smallest_group() const noexcept;  // mu
    bool symmetric() const noexcept;

    auto begin() const noexcept { return groups_.begin(); }
    auto end() const noexcept { return groups_.end(); }

    friend bool operator==(const Grouping& a, const Grouping& b) { return a.groups_ == b.groups_; }

private:
    std::vector<std::vector<std::size_t>> groups_;
    std::vector<std::size_t> group_of_;
};

/// Per-agent strict rankings, most preferred first.
class OrdinalProfile {
public:
    // Throws ProfileError unless every ranking is a permutation of 0..m-1.
    OrdinalProfile(std::size_t m, std::vector<std::vector<std::size_t>> rankings);

    std::size_t agents() const noexcept { return rankings_.size(); }
    std::size_t alternatives() const noexcept { return m_; }
    const std::vector<std::size_t>& ranking(std::size_t agent) const { return rankings_.at(agent); }
    const std::vector<std::vector<std::size_t>>& rankings() const noexcept { return rankings_; }

    // 0 = most preferred.
    std::size_t rank_position(std::size_t agent, std::size_t alt) const {
        return position_.at(agent * m_ + alt);
    }
    std::size_t top(std::size_t agent) const { return rankings_.at(agent).front(); }
    bool weakly_prefers(std::size_t agent, std::size_t x, std::size_t y) const {
        return rank_position(agent, x) <= rank_position(agent, y);
    }

    friend bool operator==(const OrdinalProfile& a, const OrdinalProfile& b) {
        return a.m_ == b.m_ && a.rankings_ == b.rankings_;
    }

private:
    std::size_t m_;
    std::vector<std::vector<std::size_t>> rankings_;
    std::vector<std::size_t> position_;
};

enum class Objective { MaxOfAvg, AvgOfMax };

std::string_view to_string(Objective obj) noexcept;
// Accepts "max-of-avg" / "avg-of-max"; throws Error otherwise.
Objective parse_objective(std::string_view text);

struct MetricViolation {
    enum class Kind { Diagonal, Negative, Asymmetric, Triangle, NotFinite };
    Kind kind;
    std::size_t p;
    std::size_t q;
    std::size_t r;  // middle point for Triangle, otherwise equal to q
    double slack;   // amount by which the axiom fails
};

struct ValidationResult {
    std::vector<MetricViolation> violations;
    bool ok() const noexcept { return violations.empty(); }
    explicit operator bool() const noexcept { return ok(); }
};

std::string describe(const MetricViolation& v);

ValidationResult validate_instance(const Instance& inst, double tol = kDefaultMetricTolerance);

// Same checks on a raw row matrix; throws DimensionError if it is not
// (n+m) x (n+m).
ValidationResult validate_matrix(std::size_t n, std::size_t m, const std::vector<std::vector<double>>& rows,
                                 double tol = kDefaultMetricTolerance);

// Only the alternative block (used when alternative distances are all a
// mechanism can see).
ValidationResult validate_square_metric(std::span<const double> flat, std::size_t size,
                                        double tol = kDefaultMetricTolerance);

// Sort by increasing distance, equal distances broken by lower index.
OrdinalProfile ordinal_profile_from_instance(const Instance& inst);

// True when d(i, r_t) <= d(i, r_{t+1}) + tol along every agent's ranking.
bool profile_consistent(const Instance& inst, const OrdinalProfile& profile, double tol = kDefaultMetricTolerance);

}  // namespace groupvote
