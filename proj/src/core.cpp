#include "groupvote/core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace groupvote {

namespace {

void check_counts(std::size_t n, std::size_t m) {
    if (n < 1) throw DimensionError("instance needs at least one agent");
    if (m < 2) throw DimensionError("instance needs at least two alternatives");
}

template <typename At>
void collect_violations(std::size_t size, double tol, At at, std::vector<MetricViolation>& out) {
    using Kind = MetricViolation::Kind;
    bool finite = true;
    for (std::size_t p = 0; p < size; ++p) {
        for (std::size_t q = 0; q < size; ++q) {
            const double d = at(p, q);
            if (!std::isfinite(d)) {
                out.push_back({Kind::NotFinite, p, q, q, d});
                finite = false;
                continue;
            }
            if (p == q) {
                if (std::abs(d) > tol) out.push_back({Kind::Diagonal, p, q, q, std::abs(d)});
                continue;
            }
            if (d < -tol) out.push_back({Kind::Negative, p, q, q, -d});
            if (p < q) {
                const double back = at(q, p);
                if (std::isfinite(back) && std::abs(d - back) > tol) {
                    out.push_back({Kind::Asymmetric, p, q, q, std::abs(d - back)});
                }
            }
        }
    }
    if (!finite) return;
    for (std::size_t p = 0; p < size; ++p) {
        for (std::size_t q = p + 1; q < size; ++q) {
            const double direct = at(p, q);
            for (std::size_t r = 0; r < size; ++r) {
                if (r == p || r == q) continue;
                const double slack = direct - (at(p, r) + at(r, q));
                if (slack > tol) out.push_back({Kind::Triangle, p, q, r, slack});
            }
        }
    }
}

}  // namespace

Instance::Instance(std::size_t n, std::size_t m, std::vector<double> flat_dist)
    : n_(n), m_(m), dist_(std::move(flat_dist)) {
    check_counts(n, m);
    if (dist_.size() != points() * points()) {
        throw DimensionError("distance matrix has " + std::to_string(dist_.size()) + " entries, expected " +
                             std::to_string(points() * points()));
    }
}

Instance::Instance(std::size_t n, std::size_t m, const std::vector<std::vector<double>>& rows) : n_(n), m_(m) {
    check_counts(n, m);
    const std::size_t size = n + m;
    if (rows.size() != size) {
        throw DimensionError("distance matrix has " + std::to_string(rows.size()) + " rows, expected " +
                             std::to_string(size));
    }
    dist_.reserve(size * size);
    for (std::size_t p = 0; p < size; ++p) {
        if (rows[p].size() != size) {
            throw DimensionError("row " + std::to_string(p) + " has " + std::to_string(rows[p].size()) +
                                 " entries, expected " + std::to_string(size));
        }
        dist_.insert(dist_.end(), rows[p].begin(), rows[p].end());
    }
}

Instance Instance::scaled(double c) const {
    if (!(c > 0)) throw Error("scale factor must be positive");
    std::vector<double> out(dist_);
    for (double& d : out) d *= c;
    return Instance(n_, m_, std::move(out));
}

Instance Instance::on_line(std::span<const double> agent_positions, std::span<const double> alt_positions) {
    std::vector<double> pos(agent_positions.begin(), agent_positions.end());
    pos.insert(pos.end(), alt_positions.begin(), alt_positions.end());
    const std::size_t size = pos.size();
    // Row-major sequential fill; the large lower-bound families reach ~10^8 entries.
    std::vector<double> flat;
    flat.reserve(size * size);
    for (std::size_t p = 0; p < size; ++p) {
        for (std::size_t q = 0; q < size; ++q) flat.push_back(std::abs(pos[p] - pos[q]));
    }
    return Instance(agent_positions.size(), alt_positions.size(), std::move(flat));
}

Grouping::Grouping(std::vector<std::vector<std::size_t>> groups, std::size_t n)
    : groups_(std::move(groups)), group_of_(n, n) {
    if (groups_.empty()) throw GroupingError("grouping has no groups");
    for (std::size_t g = 0; g < groups_.size(); ++g) {
        if (groups_[g].empty()) throw GroupingError("group " + std::to_string(g) + " is empty");
        for (std::size_t agent : groups_[g]) {
            if (agent >= n) {
                throw GroupingError("group " + std::to_string(g) + " references agent " + std::to_string(agent) +
                                    " but there are only " + std::to_string(n) + " agents");
            }
            if (group_of_[agent] != n) {
                throw GroupingError("agent " + std::to_string(agent) + " appears in groups " +
                                    std::to_string(group_of_[agent]) + " and " + std::to_string(g));
            }
            group_of_[agent] = g;
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (group_of_[i] == n) throw GroupingError("agent " + std::to_string(i) + " is in no group");
    }
}

Grouping Grouping::singletons(std::size_t n) {
    std::vector<std::vector<std::size_t>> groups(n);
    for (std::size_t i = 0; i < n; ++i) groups[i] = {i};
    return Grouping(std::move(groups), n);
}

Grouping Grouping::single(std::size_t n) {
    std::vector<std::size_t> all(n);
    std::iota(all.begin(), all.end(), std::size_t{0});
    return Grouping({std::move(all)}, n);
}

std::size_t Grouping::smallest_group() const noexcept {
    std::size_t mu = groups_.front().size();
    for (const auto& g : groups_) mu = std::min(mu, g.size());
    return mu;
}

bool Grouping::symmetric() const noexcept {
    const std::size_t lambda = groups_.front().size();
    return std::all_of(groups_.begin(), groups_.end(), [&](const auto& g) { return g.size() == lambda; });
}

OrdinalProfile::OrdinalProfile(std::size_t m, std::vector<std::vector<std::size_t>> rankings)
    : m_(m), rankings_(std::move(rankings)), position_(rankings_.size() * m, m) {
    if (m < 2) throw ProfileError("profile needs at least two alternatives");
    for (std::size_t i = 0; i < rankings_.size(); ++i) {
        const auto& r = rankings_[i];
        if (r.size() != m) {
            throw ProfileError("ranking of agent " + std::to_string(i) + " has " + std::to_string(r.size()) +
                               " entries, expected " + std::to_string(m));
        }
        for (std::size_t pos = 0; pos < m; ++pos) {
            const std::size_t alt = r[pos];
            if (alt >= m || position_[i * m + alt] != m) {
                throw ProfileError("ranking of agent " + std::to_string(i) + " is not a permutation of 0.." +
                                   std::to_string(m - 1));
            }
            position_[i * m + alt] = pos;
        }
    }
}

std::string_view to_string(Objective obj) noexcept {
    return obj == Objective::MaxOfAvg ? "max-of-avg" : "avg-of-max";
}

Objective parse_objective(std::string_view text) {
    if (text == "max-of-avg") return Objective::MaxOfAvg;
    if (text == "avg-of-max") return Objective::AvgOfMax;
    throw Error("unknown objective '" + std::string(text) + "' (expected max-of-avg or avg-of-max)");
}

std::string describe(const MetricViolation& v) {
    using Kind = MetricViolation::Kind;
    std::ostringstream os;
    os.precision(17);
    switch (v.kind) {
        case Kind::Diagonal: os << "d(" << v.p << "," << v.p << ") != 0"; break;
        case Kind::Negative: os << "d(" << v.p << "," << v.q << ") < 0"; break;
        case Kind::Asymmetric: os << "d(" << v.p << "," << v.q << ") != d(" << v.q << "," << v.p << ")"; break;
        case Kind::NotFinite: os << "d(" << v.p << "," << v.q << ") is not finite"; break;
        case Kind::Triangle:
            os << "triangle (" << v.p << "," << v.r << "," << v.q << "): d(" << v.p << "," << v.q << ") > d(" << v.p
               << "," << v.r << ") + d(" << v.r << "," << v.q << ")";
            break;
    }
    os << ", slack " << v.slack;
    return os.str();
}

ValidationResult validate_instance(const Instance& inst, double tol) {
    ValidationResult result;
    collect_violations(inst.points(), tol, [&](std::size_t p, std::size_t q) { return inst.at(p, q); },
                       result.violations);
    return result;
}

ValidationResult validate_matrix(std::size_t n, std::size_t m, const std::vector<std::vector<double>>& rows,
                                 double tol) {
    const std::size_t size = n + m;
    if (rows.size() != size) throw DimensionError("matrix must have n+m rows");
    for (const auto& row : rows) {
        if (row.size() != size) throw DimensionError("matrix must be square");
    }
    ValidationResult result;
    collect_violations(size, tol, [&](std::size_t p, std::size_t q) { return rows[p][q]; }, result.violations);
    return result;
}

ValidationResult validate_square_metric(std::span<const double> flat, std::size_t size, double tol) {
    if (flat.size() != size * size) throw DimensionError("alternative matrix must be square");
    ValidationResult result;
    collect_violations(size, tol, [&](std::size_t p, std::size_t q) { return flat[p * size + q]; },
                       result.violations);
    return result;
}

OrdinalProfile ordinal_profile_from_instance(const Instance& inst) {
    const std::size_t m = inst.alternatives();
    std::vector<std::vector<std::size_t>> rankings(inst.agents());
    for (std::size_t i = 0; i < inst.agents(); ++i) {
        auto& r = rankings[i];
        r.resize(m);
        std::iota(r.begin(), r.end(), std::size_t{0});
        std::stable_sort(r.begin(), r.end(),
                         [&](std::size_t x, std::size_t y) { return inst.agent_alt(i, x) < inst.agent_alt(i, y); });
    }
    return OrdinalProfile(m, std::move(rankings));
}

bool profile_consistent(const Instance& inst, const OrdinalProfile& profile, double tol) {
    if (profile.agents() != inst.agents() || profile.alternatives() != inst.alternatives()) return false;
    for (std::size_t i = 0; i < inst.agents(); ++i) {
        const auto& r = profile.ranking(i);
        for (std::size_t t = 0; t + 1 < r.size(); ++t) {
            if (inst.agent_alt(i, r[t]) > inst.agent_alt(i, r[t + 1]) + tol) return false;
        }
    }
    return true;
}

}  // namespace groupvote
