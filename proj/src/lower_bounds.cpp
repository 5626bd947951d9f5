#include <string>

#include "groupvote/adversary.hpp"

namespace groupvote {

namespace {

// Accumulates agents group by group on the real line.
class LineLayout {
public:
    void add(std::size_t count, double position) {
        for (std::size_t t = 0; t < count; ++t) {
            groups_.back().push_back(positions_.size());
            positions_.push_back(position);
        }
    }
    void new_group() { groups_.emplace_back(); }

    LowerBoundInstance finish(std::vector<double> alts, Objective obj, double predicted, Family family,
                              FamilyParams params) && {
        const std::size_t n = positions_.size();
        return LowerBoundInstance{Instance::on_line(positions_, alts),
                                  Grouping(std::move(groups_), n),
                                  0,
                                  obj,
                                  predicted,
                                  family,
                                  params};
    }

private:
    std::vector<double> positions_;
    std::vector<std::vector<std::size_t>> groups_;
};

void require(bool ok, const std::string& what) {
    if (!ok) throw PreconditionError(what);
}

}  // namespace

std::string_view to_string(Family f) noexcept {
    switch (f) {
        case Family::FullMaxAvg: return "full-maxavg";
        case Family::FullAvgMaxSym: return "full-avgmax-sym";
        case Family::FullAvgMaxAsym: return "full-avgmax-asym";
        case Family::OrdMaxAvg: return "ord-maxavg";
        case Family::OrdAvgMaxSym: return "ord-avgmax-sym";
        case Family::OrdAvgMaxAsym: return "ord-avgmax-asym";
    }
    return "?";
}

Family parse_family(std::string_view text) {
    for (Family f : kAllFamilies) {
        if (to_string(f) == text) return f;
    }
    throw Error("unknown lower-bound family '" + std::string(text) + "'");
}

LowerBoundInstance gen_full_maxavg(std::size_t lambda) {
    require(lambda >= 2, "full-maxavg needs lambda >= 2");
    LineLayout layout;
    layout.new_group();
    layout.add(lambda, 4.0);
    for (std::size_t g = 0; g < lambda; ++g) {
        layout.new_group();
        layout.add(1, 0.0);
        layout.add(lambda - 1, 2.0);
    }
    const double l = static_cast<double>(lambda);
    return std::move(layout).finish({1.0, 3.0}, Objective::MaxOfAvg, 3.0 * l / (l + 2.0), Family::FullMaxAvg,
                                    {lambda, {}, {}});
}

LowerBoundInstance gen_full_avgmax_symmetric(std::size_t lambda) {
    require(lambda >= 2, "full-avgmax-sym needs lambda >= 2");
    // Same points as full-maxavg with the grouping reflected about 2: the
    // group of lambda agents sits at 0 and each other group holds the agent
    // at 4, so that a (not b) is the expensive alternative.
    LineLayout layout;
    layout.new_group();
    layout.add(lambda, 0.0);
    for (std::size_t g = 0; g < lambda; ++g) {
        layout.new_group();
        layout.add(1, 4.0);
        layout.add(lambda - 1, 2.0);
    }
    const double l = static_cast<double>(lambda);
    return std::move(layout).finish({1.0, 3.0}, Objective::AvgOfMax, (3.0 * l + 1.0) / (l + 3.0),
                                    Family::FullAvgMaxSym, {lambda, {}, {}});
}

LowerBoundInstance gen_full_avgmax_asym(std::size_t k) {
    require(k >= 2, "full-avgmax-asym needs k >= 2");
    LineLayout layout;
    layout.new_group();
    layout.add(k, 0.0);
    layout.add(1, 1.0);
    for (std::size_t g = 1; g < k; ++g) {
        layout.new_group();
        layout.add(1, 1.0);
    }
    return std::move(layout).finish({0.0, 1.0}, Objective::AvgOfMax, static_cast<double>(k), Family::FullAvgMaxAsym,
                                    {{}, k, {}});
}

LowerBoundInstance gen_ordinal_maxavg(std::size_t lambda) {
    require(lambda >= 3 && lambda % 2 == 1, "ord-maxavg needs an odd lambda >= 3");
    const double l = static_cast<double>(lambda);
    LineLayout layout;
    layout.new_group();
    layout.add(lambda, 2.0 + (l + 1.0) / (2.0 * l));
    for (std::size_t g = 0; g < lambda; ++g) {
        layout.new_group();
        layout.add((lambda + 1) / 2, 1.0);  // equidistant; ranks a first by index
        layout.add((lambda - 1) / 2, 2.0);
    }
    return std::move(layout).finish({0.0, 2.0}, Objective::MaxOfAvg, (5.0 * l + 1.0) / (l + 1.0), Family::OrdMaxAvg,
                                    {lambda, {}, {}});
}

LowerBoundInstance gen_ordinal_avgmax_symmetric(std::size_t lambda, double epsilon) {
    require(lambda >= 2, "ord-avgmax-sym needs lambda >= 2");
    require(epsilon > 0 && epsilon <= 1, "ord-avgmax-sym needs 0 < epsilon <= 1");
    const double l = static_cast<double>(lambda);
    LineLayout layout;
    for (std::size_t g = 0; g < lambda; ++g) {
        layout.new_group();
        layout.add(lambda - 1, 1.0 - epsilon / 10.0);
        layout.add(1, 3.0);
    }
    for (std::size_t g = 0; g + 2 < lambda; ++g) {
        layout.new_group();
        layout.add(lambda, 2.0);
    }
    return std::move(layout).finish({0.0, 2.0}, Objective::AvgOfMax, (5.0 * l - 4.0) / (l * (1.0 + epsilon / 10.0)),
                                    Family::OrdAvgMaxSym, {lambda, {}, epsilon});
}

LowerBoundInstance gen_ordinal_avgmax_asym(std::size_t k) {
    require(k >= 2, "ord-avgmax-asym needs k >= 2");
    LineLayout layout;
    layout.new_group();
    layout.add(k, 1.0);  // equidistant; ranks a first by index
    layout.add(1, 3.0);
    for (std::size_t g = 1; g < k; ++g) {
        layout.new_group();
        layout.add(1, 2.0);
    }
    return std::move(layout).finish({0.0, 2.0}, Objective::AvgOfMax, 2.0 * static_cast<double>(k) + 1.0,
                                    Family::OrdAvgMaxAsym, {{}, k, {}});
}

LowerBoundInstance make_lower_bound(Family family, const FamilyParams& params) {
    auto need = [&](const std::optional<std::size_t>& v, const char* name) {
        if (!v) throw PreconditionError(std::string("family ") + std::string(to_string(family)) + " needs --" + name);
        return *v;
    };
    switch (family) {
        case Family::FullMaxAvg: return gen_full_maxavg(need(params.lambda, "lambda"));
        case Family::FullAvgMaxSym: return gen_full_avgmax_symmetric(need(params.lambda, "lambda"));
        case Family::FullAvgMaxAsym: return gen_full_avgmax_asym(need(params.k, "k"));
        case Family::OrdMaxAvg: return gen_ordinal_maxavg(need(params.lambda, "lambda"));
        case Family::OrdAvgMaxSym:
            return gen_ordinal_avgmax_symmetric(need(params.lambda, "lambda"), params.epsilon.value_or(0.1));
        case Family::OrdAvgMaxAsym: return gen_ordinal_avgmax_asym(need(params.k, "k"));
    }
    throw Error("unknown family");
}

}  // namespace groupvote
