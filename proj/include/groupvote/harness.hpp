#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "groupvote/core.hpp"
#include "groupvote/mechanisms.hpp"

namespace groupvote {

struct RandomInstance {
    Instance instance;
    Grouping grouping;
};

/// Agents then alternatives drawn uniformly from [0,1]^dim, Euclidean
/// distances. The grouping is uniform over partitions into exactly k
/// non-empty groups (equal-size partitions when symmetric). Same arguments,
/// same bits.
RandomInstance gen_random_euclidean(std::size_t n, std::size_t m, std::size_t k, std::size_t dim,
                                    std::uint64_t seed, bool symmetric);

// Theorem bound registered for a mechanism/objective pair on this grouping,
// or nullopt when the combination carries no guarantee (exploratory).
std::optional<double> registered_bound(MechanismId id, Objective obj, const Grouping& grp);

// Whether the pair has a guarantee on the groupings a sweep will generate.
bool has_guarantee(MechanismId id, Objective obj, bool symmetric_groups);

struct Range {
    std::size_t lo = 0;
    std::size_t hi = 0;
};

struct ExperimentConfig {
    std::uint64_t seed = 1;
    std::size_t trials = 100;
    Range n{2, 30};
    Range m{2, 6};
    Range k{1, 5};
    Range dim{1, 3};
    bool symmetric_groups = false;
    std::vector<MechanismId> mechanisms{MechanismId::MinTotal};
    std::vector<Objective> objectives{Objective::MaxOfAvg};
    bool allow_exploratory = false;
    unsigned threads = 1;
    double tolerance = 1e-9;  // slack on registered bounds
    std::string csv_path;
    std::string summary_path;

    // Throws Error describing the first problem found.
    void validate() const;
    // (n, k) pairs the sweep draws from.
    std::vector<std::pair<std::size_t, std::size_t>> admissible_shapes() const;
};

ExperimentConfig load_experiment_config(const std::filesystem::path& path);

struct ExperimentRow {
    std::size_t trial = 0;
    std::size_t n = 0, m = 0, k = 0, dim = 0;
    bool symmetric = false;
    std::uint64_t instance_seed = 0;
    std::string digest;
    MechanismId mechanism = MechanismId::MinTotal;
    Objective objective = Objective::MaxOfAvg;
    std::size_t winner = 0;
    double winner_cost = 0;
    std::size_t opt = 0;
    double opt_cost = 0;
    double ratio = 1;
    std::optional<double> bound;
};

struct SummaryEntry {
    MechanismId mechanism;
    Objective objective;
    std::size_t count = 0;
    double max = 0;
    double mean = 0;
    double p95 = 0;  // nearest-rank
};

struct ExperimentReport {
    ExperimentConfig config;
    std::vector<ExperimentRow> rows;  // ordered by trial, then mechanism, then objective
    std::vector<SummaryEntry> summary;
};

// Raised when a row breaks its registered bound; the message carries the
// replay command for the offending trial.
class BoundViolation : public InvariantViolation {
public:
    using InvariantViolation::InvariantViolation;
};

// Per-trial seeds: derive_seed(cfg.seed, trial). Rows do not depend on the
// thread count.
ExperimentReport run_experiment(const ExperimentConfig& cfg);

std::vector<SummaryEntry> summarize(const std::vector<ExperimentRow>& rows);

void write_csv(std::ostream& os, const ExperimentReport& report);
void write_summary_json(std::ostream& os, const ExperimentReport& report);

// FNV-1a over distances and group labels, as 16 hex digits.
std::string instance_digest(const Instance& inst, const Grouping& grp);

}  // namespace groupvote
