#include "groupvote/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstring>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <numeric>
#include <ostream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "groupvote/instance_io.hpp"
#include "groupvote/objectives.hpp"
#include "groupvote/partitions.hpp"
#include "groupvote/rng.hpp"

namespace groupvote {

namespace {

// Labels (blocks by first appearance) of a uniformly random partition of n
// items into exactly k blocks, using S(n,k) = S(n-1,k-1) + k S(n-1,k).
std::vector<std::size_t> uniform_partition_labels(std::size_t n, std::size_t k, Rng& rng) {
    // Decide, from the last item down, whether item i opens a block or joins
    // one of the blocks already formed by items 0..i-1.
    constexpr std::size_t kOpens = static_cast<std::size_t>(-1);
    std::vector<std::size_t> choice(n);
    std::size_t blocks = k;
    for (std::size_t i = n; i-- > 0;) {
        const uint128 total = stirling2(i + 1, blocks);
        const uint128 open = stirling2(i, blocks - 1);
        const uint128 r = rng.below(total);
        if (r < open) {
            choice[i] = kOpens;
            --blocks;
        } else {
            choice[i] = static_cast<std::size_t>((r - open) / stirling2(i, blocks));
        }
    }
    std::vector<std::size_t> labels(n);
    std::size_t opened = 0;
    for (std::size_t i = 0; i < n; ++i) labels[i] = choice[i] == kOpens ? opened++ : choice[i];
    return labels;
}

std::string format_double(double v) { return format_real(v); }

void check_range(const Range& r, const char* name, std::size_t floor) {
    if (r.lo > r.hi) throw Error(std::string(name) + " range is empty");
    if (r.lo < floor) throw Error(std::string(name) + " must be at least " + std::to_string(floor));
}

std::size_t draw(Rng& rng, const Range& r) {
    return r.lo + static_cast<std::size_t>(rng.below(static_cast<std::uint64_t>(r.hi - r.lo + 1)));
}

std::string replay_hint(const ExperimentConfig& cfg, const ExperimentRow& row) {
    std::ostringstream os;
    os << "trial " << row.trial << " (sweep seed " << cfg.seed << "); replay with: gen --n " << row.n << " --m "
       << row.m << " --k " << row.k << " --dim " << row.dim << " --seed " << row.instance_seed
       << (row.symmetric ? " --symmetric" : "");
    return os.str();
}

}  // namespace

RandomInstance gen_random_euclidean(std::size_t n, std::size_t m, std::size_t k, std::size_t dim,
                                    std::uint64_t seed, bool symmetric) {
    if (n < 1 || m < 2) throw PreconditionError("need n >= 1 and m >= 2");
    if (k < 1 || k > n) throw PreconditionError("need 1 <= k <= n");
    if (dim < 1) throw PreconditionError("need dim >= 1");
    if (symmetric && n % k != 0) throw PreconditionError("symmetric groupings need k to divide n");

    Rng rng(seed);
    const std::size_t size = n + m;
    std::vector<double> coords(size * dim);
    for (double& c : coords) c = rng.uniform01();
    std::vector<double> flat(size * size, 0.0);
    for (std::size_t p = 0; p < size; ++p) {
        for (std::size_t q = p + 1; q < size; ++q) {
            double sq = 0;
            for (std::size_t t = 0; t < dim; ++t) {
                const double diff = coords[p * dim + t] - coords[q * dim + t];
                sq += diff * diff;
            }
            const double d = std::sqrt(sq);
            flat[p * size + q] = d;
            flat[q * size + p] = d;
        }
    }

    std::vector<std::vector<std::size_t>> groups(k);
    if (symmetric) {
        std::vector<std::size_t> perm(n);
        std::iota(perm.begin(), perm.end(), std::size_t{0});
        rng.shuffle(perm);
        const std::size_t lambda = n / k;
        for (std::size_t t = 0; t < n; ++t) groups[t / lambda].push_back(perm[t]);
        for (auto& g : groups) std::sort(g.begin(), g.end());
    } else {
        groups = blocks_from_labels(uniform_partition_labels(n, k, rng), k);
    }
    return {Instance(n, m, std::move(flat)), Grouping(std::move(groups), n)};
}

std::optional<double> registered_bound(MechanismId id, Objective obj, const Grouping& grp) {
    const double k = static_cast<double>(grp.size());
    const bool sym = grp.symmetric();
    const bool mao = obj == Objective::MaxOfAvg;
    switch (id) {
        case MechanismId::MinTotal:
            if (mao) return 3.0 - 2.0 * static_cast<double>(grp.smallest_group()) / static_cast<double>(grp.agents());
            if (sym) return 3.0;
            return std::nullopt;
        case MechanismId::MinMax:
            if (!mao) return k;
            return std::nullopt;
        case MechanismId::Matching:
        case MechanismId::PluralityVeto:
            if (mao || sym) return 5.0;
            return std::nullopt;
        case MechanismId::TopChoice:
            if (!mao) return 2.0 * k + 1.0;
            return std::nullopt;
        case MechanismId::Gpm:
        case MechanismId::VirtualMma:
            if (mao) return 3.0;
            return std::nullopt;
        case MechanismId::GroupScore:
        case MechanismId::VirtualVam:
            if (!mao) return 3.0;
            return std::nullopt;
    }
    return std::nullopt;
}

bool has_guarantee(MechanismId id, Objective obj, bool symmetric_groups) {
    // Probe with a grouping of the requested shape.
    const Grouping probe = symmetric_groups ? Grouping({{0, 1}, {2, 3}}, 4) : Grouping({{0}, {1, 2}}, 3);
    return registered_bound(id, obj, probe).has_value();
}

void ExperimentConfig::validate() const {
    check_range(n, "n", 1);
    check_range(m, "m", 2);
    check_range(k, "k", 1);
    check_range(dim, "dim", 1);
    if (mechanisms.empty()) throw Error("no mechanisms selected");
    if (objectives.empty()) throw Error("no objectives selected");
    if (threads == 0) throw Error("threads must be at least 1");
    if (!(tolerance >= 0)) throw Error("tolerance must be non-negative");
    if (admissible_shapes().empty()) {
        throw Error(symmetric_groups ? "no (n, k) in range with k dividing n" : "no (n, k) in range with k <= n");
    }
    for (MechanismId id : mechanisms) {
        if (requires_two_alternatives(id) && (m.lo != 2 || m.hi != 2)) {
            throw Error("mechanism " + std::string(to_string(id)) + " needs m fixed at 2");
        }
        for (Objective obj : objectives) {
            if (!allow_exploratory && !has_guarantee(id, obj, symmetric_groups)) {
                throw Error("no registered bound for " + std::string(to_string(id)) + " / " +
                            std::string(to_string(obj)) + (symmetric_groups ? "" : " on asymmetric groupings") +
                            "; pass --exploratory to run it anyway");
            }
        }
    }
}

std::vector<std::pair<std::size_t, std::size_t>> ExperimentConfig::admissible_shapes() const {
    std::vector<std::pair<std::size_t, std::size_t>> shapes;
    for (std::size_t nn = n.lo; nn <= n.hi; ++nn) {
        for (std::size_t kk = k.lo; kk <= k.hi && kk <= nn; ++kk) {
            if (symmetric_groups && nn % kk != 0) continue;
            shapes.emplace_back(nn, kk);
        }
    }
    return shapes;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path.string());
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(path.string(), e.what());
    }
    ExperimentConfig cfg;
    try {
        auto range = [&](const char* key, Range& r) {
            if (auto it = doc.find(key); it != doc.end()) {
                r.lo = it->at(0).get<std::size_t>();
                r.hi = it->at(1).get<std::size_t>();
            }
        };
        cfg.seed = doc.value("seed", cfg.seed);
        cfg.trials = doc.value("trials", cfg.trials);
        range("n", cfg.n);
        range("m", cfg.m);
        range("k", cfg.k);
        range("dim", cfg.dim);
        cfg.symmetric_groups = doc.value("symmetric_groups", cfg.symmetric_groups);
        cfg.allow_exploratory = doc.value("exploratory", cfg.allow_exploratory);
        cfg.threads = doc.value("threads", cfg.threads);
        cfg.tolerance = doc.value("tolerance", cfg.tolerance);
        cfg.csv_path = doc.value("csv", cfg.csv_path);
        cfg.summary_path = doc.value("summary", cfg.summary_path);
        if (auto it = doc.find("mechanisms"); it != doc.end()) {
            cfg.mechanisms.clear();
            for (const auto& v : *it) cfg.mechanisms.push_back(parse_mechanism(v.get<std::string>()));
        }
        if (auto it = doc.find("objectives"); it != doc.end()) {
            cfg.objectives.clear();
            for (const auto& v : *it) cfg.objectives.push_back(parse_objective(v.get<std::string>()));
        }
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(path.string(), e.what());
    }
    return cfg;
}

std::string instance_digest(const Instance& inst, const Grouping& grp) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto mix = [&](const void* data, std::size_t len) {
        const auto* bytes = static_cast<const unsigned char*>(data);
        for (std::size_t t = 0; t < len; ++t) {
            h ^= bytes[t];
            h *= 0x100000001b3ULL;
        }
    };
    for (double d : inst.flat()) {
        std::uint64_t bits;
        std::memcpy(&bits, &d, sizeof bits);
        mix(&bits, sizeof bits);
    }
    for (std::size_t i = 0; i < grp.agents(); ++i) {
        const std::uint64_t g = grp.group_of(i);
        mix(&g, sizeof g);
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

ExperimentReport run_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    const auto shapes = cfg.admissible_shapes();
    std::vector<std::vector<ExperimentRow>> per_trial(cfg.trials);

    auto run_trial = [&](std::size_t trial) {
        const std::uint64_t trial_seed = derive_seed(cfg.seed, trial);
        Rng shape_rng(trial_seed);
        const auto [n, k] = shapes[static_cast<std::size_t>(shape_rng.below(std::uint64_t{shapes.size()}))];
        const std::size_t m = draw(shape_rng, cfg.m);
        const std::size_t dim = draw(shape_rng, cfg.dim);
        const std::uint64_t instance_seed = derive_seed(trial_seed, 1);
        const RandomInstance ri = gen_random_euclidean(n, m, k, dim, instance_seed, cfg.symmetric_groups);
        const std::string digest = instance_digest(ri.instance, ri.grouping);

        auto& rows = per_trial[trial];
        for (MechanismId id : cfg.mechanisms) {
            std::size_t winner;
            try {
                winner = select_winner(id, ri.instance, ri.grouping);
            } catch (const Error& e) {
                ExperimentRow ctx;
                ctx.trial = trial;
                ctx.n = n;
                ctx.m = m;
                ctx.k = k;
                ctx.dim = dim;
                ctx.symmetric = cfg.symmetric_groups;
                ctx.instance_seed = instance_seed;
                throw InvariantViolation(std::string(e.what()) + " in " + replay_hint(cfg, ctx));
            }
            for (Objective obj : cfg.objectives) {
                const DistortionReport rep = distortion(ri.instance, ri.grouping, obj, winner);
                ExperimentRow row;
                row.trial = trial;
                row.n = n;
                row.m = m;
                row.k = k;
                row.dim = dim;
                row.symmetric = ri.grouping.symmetric();
                row.instance_seed = instance_seed;
                row.digest = digest;
                row.mechanism = id;
                row.objective = obj;
                row.winner = winner;
                row.winner_cost = rep.winner_cost;
                row.opt = rep.opt;
                row.opt_cost = rep.opt_cost;
                row.ratio = rep.ratio;
                row.bound = registered_bound(id, obj, ri.grouping);
                if (row.ratio < 1.0 - 1e-12) {
                    throw InvariantViolation("ratio below 1 in " + replay_hint(cfg, row));
                }
                if (row.bound && !(row.ratio <= *row.bound + cfg.tolerance)) {
                    throw BoundViolation(std::string(to_string(id)) + " / " + std::string(to_string(obj)) +
                                         " ratio " + format_double(row.ratio) + " exceeds bound " +
                                         format_double(*row.bound) + " in " + replay_hint(cfg, row));
                }
                rows.push_back(std::move(row));
            }
        }
    };

    if (cfg.threads <= 1 || cfg.trials < 2) {
        for (std::size_t t = 0; t < cfg.trials; ++t) run_trial(t);
    } else {
        std::atomic<std::size_t> next{0};
        std::mutex failure_mutex;
        std::size_t failed_trial = cfg.trials;
        std::exception_ptr failure;
        std::vector<std::thread> workers;
        const unsigned count = std::min<unsigned>(cfg.threads, static_cast<unsigned>(cfg.trials));
        for (unsigned w = 0; w < count; ++w) {
            workers.emplace_back([&] {
                for (std::size_t t = next++; t < cfg.trials; t = next++) {
                    try {
                        run_trial(t);
                    } catch (...) {
                        std::lock_guard lock(failure_mutex);
                        if (t < failed_trial) {
                            failed_trial = t;
                            failure = std::current_exception();
                        }
                    }
                }
            });
        }
        for (auto& w : workers) w.join();
        if (failure) std::rethrow_exception(failure);
    }

    ExperimentReport report;
    report.config = cfg;
    for (auto& rows : per_trial) {
        for (auto& row : rows) report.rows.push_back(std::move(row));
    }
    report.summary = summarize(report.rows);
    return report;
}

std::vector<SummaryEntry> summarize(const std::vector<ExperimentRow>& rows) {
    std::map<std::pair<int, int>, std::vector<double>> buckets;
    for (const auto& row : rows) {
        buckets[{static_cast<int>(row.mechanism), static_cast<int>(row.objective)}].push_back(row.ratio);
    }
    std::vector<SummaryEntry> out;
    for (auto& [key, ratios] : buckets) {
        SummaryEntry e{static_cast<MechanismId>(key.first), static_cast<Objective>(key.second)};
        e.count = ratios.size();
        e.mean = std::accumulate(ratios.begin(), ratios.end(), 0.0) / static_cast<double>(ratios.size());
        std::sort(ratios.begin(), ratios.end());
        e.max = ratios.back();
        const auto rank = static_cast<std::size_t>(std::ceil(0.95 * static_cast<double>(ratios.size())));
        e.p95 = ratios[std::max<std::size_t>(rank, 1) - 1];
        out.push_back(e);
    }
    return out;
}

void write_csv(std::ostream& os, const ExperimentReport& report) {
    os << "#schema=1 rng=" << kRngName << " seed=" << report.config.seed << " trials=" << report.config.trials
       << "\n";
    os << "trial,n,m,k,sym,mechanism,objective,winner,winner_cost,opt,opt_cost,ratio\n";
    for (const auto& r : report.rows) {
        os << r.trial << ',' << r.n << ',' << r.m << ',' << r.k << ',' << (r.symmetric ? 1 : 0) << ','
           << to_string(r.mechanism) << ',' << to_string(r.objective) << ',' << r.winner << ','
           << format_double(r.winner_cost) << ',' << r.opt << ',' << format_double(r.opt_cost) << ','
           << format_double(r.ratio) << '\n';
    }
}

void write_summary_json(std::ostream& os, const ExperimentReport& report) {
    using nlohmann::ordered_json;
    ordered_json doc;
    doc["schema"] = 1;
    doc["rng"] = kRngName;
    doc["seed"] = report.config.seed;
    doc["trials"] = report.config.trials;
    auto& summary = doc["summary"] = ordered_json::array();
    for (const auto& e : report.summary) {
        summary.push_back({{"mechanism", to_string(e.mechanism)},
                           {"objective", to_string(e.objective)},
                           {"count", e.count},
                           {"max", e.max},
                           {"mean", e.mean},
                           {"p95", e.p95}});
    }
    auto& instances = doc["instances"] = ordered_json::array();
    std::size_t last = static_cast<std::size_t>(-1);
    for (const auto& r : report.rows) {
        if (r.trial == last) continue;
        last = r.trial;
        instances.push_back({{"trial", r.trial}, {"seed", r.instance_seed}, {"digest", r.digest}});
    }
    os << doc.dump(2) << "\n";
}

}  // namespace groupvote
