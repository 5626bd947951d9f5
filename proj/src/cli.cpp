#include "groupvote/cli.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "groupvote/adversary.hpp"
#include "groupvote/harness.hpp"
#include "groupvote/instance_io.hpp"
#include "groupvote/mechanisms.hpp"
#include "groupvote/objectives.hpp"

namespace groupvote {

namespace {

namespace fs = std::filesystem;

class UsageError : public Error {
public:
    using Error::Error;
};

struct Options {
    // shared
    std::string input;
    std::string output;
    std::uint64_t seed = 1;
    std::string objective;
    std::vector<std::string> mechanisms;
    double tolerance = 1e-9;
    std::optional<std::size_t> winner;

    // gen
    std::size_t n = 10, m = 3, k = 2, dim = 2;
    bool symmetric = false;

    // lowerbound
    std::string family;
    std::optional<std::size_t> lambda;
    std::optional<std::size_t> family_k;
    std::optional<double> epsilon;
    bool no_write = false;

    // audit
    std::string mode;
    std::optional<std::size_t> audit_k;
    bool symmetric_only = false;
    bool pin_alternatives = false;
    double grid_step = 1.0;
    double grid_span = 4.0;

    // sweep
    std::string config;
    std::size_t trials = 100;
    std::string n_range, m_range, k_range, dim_range;
    bool exploratory = false;
    unsigned threads = 1;
    std::string summary;
};

Range parse_range(const std::string& text, const char* name) {
    const auto colon = text.find(':');
    try {
        std::size_t used = 0;
        if (colon == std::string::npos) {
            const auto v = std::stoull(text, &used);
            if (used != text.size()) throw std::invalid_argument(text);
            return {v, v};
        }
        const std::string a = text.substr(0, colon), b = text.substr(colon + 1);
        const auto lo = std::stoull(a, &used);
        if (used != a.size()) throw std::invalid_argument(text);
        const auto hi = std::stoull(b, &used);
        if (used != b.size()) throw std::invalid_argument(text);
        return {lo, hi};
    } catch (const std::logic_error&) {
        throw UsageError(std::string("--") + name + " expects N or LO:HI, got '" + text + "'");
    }
}

std::vector<MechanismId> parse_mechanism_list(const std::vector<std::string>& items) {
    std::vector<MechanismId> ids;
    for (const auto& item : items) {
        std::stringstream ss(item);
        std::string part;
        while (std::getline(ss, part, ',')) {
            if (part == "all") {
                ids.assign(std::begin(kAllMechanisms), std::end(kAllMechanisms));
            } else {
                ids.push_back(parse_mechanism(part));
            }
        }
    }
    return ids;
}

std::vector<Objective> objectives_or_both(const std::string& text) {
    if (text.empty() || text == "both") return {Objective::MaxOfAvg, Objective::AvgOfMax};
    return {parse_objective(text)};
}

Objective single_objective(const std::string& text) {
    if (text.empty()) throw UsageError("--objective is required");
    return parse_objective(text);
}

InstanceFile read_input(const Options& o) {
    if (o.input.empty()) throw UsageError("--input is required");
    return load_instance(o.input);
}

const Grouping& require_grouping(const InstanceFile& file) {
    if (!file.grouping) throw UsageError("the input file has no \"groups\"");
    return *file.grouping;
}

MechanismId require_single_mechanism(const Options& o) {
    if (o.mechanisms.size() != 1) throw UsageError("exactly one --mechanism is required");
    return parse_mechanism(o.mechanisms.front());
}

std::size_t resolve_winner(const Options& o, const Instance& inst, const Grouping* grp) {
    if (o.winner && !o.mechanisms.empty()) throw UsageError("give --winner or --mechanism, not both");
    if (o.winner) {
        if (*o.winner >= inst.alternatives()) throw UsageError("--winner out of range");
        return *o.winner;
    }
    if (o.mechanisms.empty()) throw UsageError("--winner or --mechanism is required");
    const auto id = require_single_mechanism(o);
    if (grp) return select_winner(id, inst, *grp);
    if (is_group_aware(id)) throw UsageError("mechanism needs a grouping in the input file");
    return select_winner(id, inst, Grouping::single(inst.agents()));
}

void write_text_file(const fs::path& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw UsageError("cannot write " + path.string());
    f << text;
    if (!f) throw UsageError("failed writing " + path.string());
}

std::string groups_text(const Grouping& grp) {
    std::ostringstream os;
    os << '[';
    for (std::size_t g = 0; g < grp.size(); ++g) {
        os << (g ? "," : "") << '[';
        for (std::size_t t = 0; t < grp[g].size(); ++t) os << (t ? "," : "") << grp[g][t];
        os << ']';
    }
    os << ']';
    return os.str();
}

int cmd_gen(const Options& o, std::ostream& out) {
    const RandomInstance ri = gen_random_euclidean(o.n, o.m, o.k, o.dim, o.seed, o.symmetric);
    const std::string text = format_instance(ri.instance, &ri.grouping);
    if (o.output.empty() || o.output == "-") {
        out << text;
    } else {
        write_text_file(o.output, text);
        out << "wrote " << o.output << "\n";
    }
    return kExitOk;
}

int cmd_eval(const Options& o, std::ostream& out) {
    const InstanceFile file = read_input(o);
    const Grouping grp = file.grouping ? *file.grouping : Grouping::single(file.instance.agents());
    const auto objectives = objectives_or_both(o.objective);
    out << "n " << file.instance.agents() << " m " << file.instance.alternatives() << " k " << grp.size()
        << " symmetric " << (grp.symmetric() ? 1 : 0) << "\n";
    for (Objective obj : objectives) {
        const CostProfile prof = cost_profile(file.instance, grp, obj);
        for (std::size_t x = 0; x < prof.costs.size(); ++x) {
            out << to_string(obj) << " alternative " << x << " cost " << format_real(prof.costs[x]) << "\n";
        }
        out << to_string(obj) << " opt " << prof.argmin.front() << " opt_cost " << format_real(prof.min_cost()) << "\n";
    }
    return kExitOk;
}

int cmd_run(const Options& o, std::ostream& out) {
    const InstanceFile file = read_input(o);
    const auto id = require_single_mechanism(o);
    const Grouping grp = file.grouping ? *file.grouping : Grouping::single(file.instance.agents());
    if (is_group_aware(id) && !file.grouping) throw UsageError("mechanism needs a grouping in the input file");
    const std::size_t winner = select_winner(id, file.instance, grp);
    out << "mechanism " << to_string(id) << "\n";
    out << "winner " << winner << "\n";
    for (Objective obj : objectives_or_both(o.objective)) {
        const DistortionReport rep = distortion(file.instance, grp, obj, winner, std::string(to_string(id)));
        out << to_string(obj) << " winner_cost " << format_real(rep.winner_cost) << " opt " << rep.opt
            << " opt_cost " << format_real(rep.opt_cost) << " ratio " << format_real(rep.ratio) << "\n";
    }
    return kExitOk;
}

int cmd_lowerbound(const Options& o, std::ostream& out, std::ostream& err) {
    if (o.family.empty()) throw UsageError("--family is required");
    const Family family = parse_family(o.family);
    FamilyParams params{o.lambda, o.family_k, o.epsilon};
    const LowerBoundInstance lb = make_lower_bound(family, params);
    const DistortionReport rep = distortion(lb.inst, lb.grp, lb.objective, lb.adversarial_winner);

    out << "family " << to_string(family) << "\n";
    out << "n " << lb.inst.agents() << " m " << lb.inst.alternatives() << " k " << lb.grp.size() << "\n";
    out << "objective " << to_string(lb.objective) << "\n";
    out << "winner " << lb.adversarial_winner << "\n";
    out << "ratio " << format_real(rep.ratio) << "\n";
    out << "predicted " << format_real(lb.predicted_ratio) << "\n";
    if (!o.no_write) {
        const std::string path = o.output.empty() ? std::string(to_string(family)) + ".json" : o.output;
        save_instance(path, lb.inst, &lb.grp);
        out << "instance " << path << "\n";
    }
    if (!(std::fabs(rep.ratio - lb.predicted_ratio) <= o.tolerance)) {
        err << "error: ratio " << format_real(rep.ratio) << " differs from the closed form "
            << format_real(lb.predicted_ratio) << "\n";
        return kExitInvariant;
    }
    return kExitOk;
}

std::string witness_path(const Options& o) {
    if (!o.output.empty()) return o.output;
    fs::path p(o.input);
    return (p.parent_path() / (p.stem().string() + ".witness.json")).string();
}

int cmd_audit(const Options& o, std::ostream& out) {
    const InstanceFile file = read_input(o);
    const Instance& inst = file.instance;
    if (o.mode == "worst-grouping") {
        if (!o.audit_k) throw UsageError("--k is required for worst-grouping");
        const Objective obj = single_objective(o.objective);
        const std::size_t winner = resolve_winner(o, inst, file.grouping ? &*file.grouping : nullptr);
        const WorstGrouping wg = worst_grouping(inst, *o.audit_k, obj, winner, o.symmetric_only);
        const std::string path = witness_path(o);
        save_instance(path, inst, &wg.grouping);
        out << "mode worst-grouping\n";
        out << "winner " << winner << "\n";
        out << "ratio " << format_real(wg.ratio) << "\n";
        out << "partitions " << wg.partitions << "\n";
        out << "grouping " << groups_text(wg.grouping) << "\n";
        out << "witness " << path << "\n";
        return kExitOk;
    }
    if (o.mode != "lp" && o.mode != "grid") throw UsageError("--mode must be worst-grouping, lp or grid");

    const Grouping& grp = require_grouping(file);
    const Objective obj = single_objective(o.objective);
    const std::size_t winner = resolve_winner(o, inst, &grp);
    const OrdinalProfile profile = ordinal_profile_from_instance(inst);
    std::optional<Instance> witness;
    double ratio;
    out << "mode " << o.mode << "\n";
    out << "winner " << winner << "\n";
    if (o.mode == "lp") {
        std::vector<double> pinned;
        if (o.pin_alternatives) {
            const std::size_t m = inst.alternatives();
            pinned.resize(m * m);
            for (std::size_t x = 0; x < m; ++x) {
                for (std::size_t y = 0; y < m; ++y) pinned[x * m + y] = inst.alt_alt(x, y);
            }
        }
        const LpAudit audit = lp_worst_metric(profile, grp, winner, obj, o.pin_alternatives ? &pinned : nullptr);
        ratio = audit.ratio;
        witness = audit.witness;
        out << "ratio " << format_real(ratio) << "\n";
        out << "unbounded " << (audit.unbounded ? 1 : 0) << "\n";
        out << "programs " << audit.programs << "\n";
    } else {
        const GridAudit audit = grid_worst_metric(profile, grp, winner, obj, o.grid_step, o.grid_span);
        ratio = audit.ratio;
        witness = audit.witness;
        out << "ratio " << format_real(ratio) << "\n";
        out << "placements " << audit.placements << "\n";
    }
    if (witness) {
        const std::string path = witness_path(o);
        save_instance(path, *witness, &grp);
        out << "witness " << path << "\n";
    } else {
        out << "witness none\n";
    }
    return kExitOk;
}

fs::path default_summary_path(const std::string& csv) {
    fs::path p(csv);
    return p.parent_path() / (p.stem().string() + ".summary.json");
}

int cmd_sweep(const Options& o, const CLI::App& sub, std::ostream& out) {
    ExperimentConfig cfg = o.config.empty() ? ExperimentConfig{} : load_experiment_config(o.config);
    auto given = [&](const char* name) { return sub.get_option(name)->count() > 0; };
    if (given("--seed")) cfg.seed = o.seed;
    if (given("--trials")) cfg.trials = o.trials;
    if (given("--n")) cfg.n = parse_range(o.n_range, "n");
    if (given("--m")) cfg.m = parse_range(o.m_range, "m");
    if (given("--k")) cfg.k = parse_range(o.k_range, "k");
    if (given("--dim")) cfg.dim = parse_range(o.dim_range, "dim");
    if (given("--symmetric")) cfg.symmetric_groups = true;
    if (given("--exploratory")) cfg.allow_exploratory = true;
    if (given("--threads")) cfg.threads = o.threads;
    if (given("--tolerance")) cfg.tolerance = o.tolerance;
    if (given("--mechanism")) cfg.mechanisms = parse_mechanism_list(o.mechanisms);
    if (given("--objective")) cfg.objectives = objectives_or_both(o.objective);
    if (given("--output")) cfg.csv_path = o.output;
    if (given("--summary")) cfg.summary_path = o.summary;
    try {
        cfg.validate();
    } catch (const InvariantViolation&) {
        throw;
    } catch (const Error& e) {
        throw UsageError(e.what());
    }

    const ExperimentReport report = run_experiment(cfg);
    const bool to_stdout = cfg.csv_path.empty() || cfg.csv_path == "-";
    std::ostringstream csv;
    write_csv(csv, report);
    std::string summary_path = cfg.summary_path;
    if (summary_path.empty() && !to_stdout) summary_path = default_summary_path(cfg.csv_path).string();
    if (to_stdout) {
        out << csv.str();
    } else {
        write_text_file(cfg.csv_path, csv.str());
    }
    if (!summary_path.empty() && summary_path != "-") {
        std::ostringstream js;
        write_summary_json(js, report);
        write_text_file(summary_path, js.str());
    }
    if (!to_stdout) {
        out << "rows " << report.rows.size() << "\n";
        out << "csv " << cfg.csv_path << "\n";
        if (!summary_path.empty()) out << "summary " << summary_path << "\n";
    }
    return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Options o;
    CLI::App app{"Group-fair metric voting: mechanisms, distortion, lower bounds and audits", "groupvote"};
    app.require_subcommand(1);

    const auto objective_help = "max-of-avg | avg-of-max";
    auto add_objective = [&](CLI::App* s) {
        s->add_option("--objective", o.objective, objective_help);
    };

    auto* gen = app.add_subcommand("gen", "Random Euclidean instance to a file");
    gen->add_option("--n", o.n, "agents")->capture_default_str();
    gen->add_option("--m", o.m, "alternatives")->capture_default_str();
    gen->add_option("--k", o.k, "groups")->capture_default_str();
    gen->add_option("--dim", o.dim, "Euclidean dimension")->capture_default_str();
    gen->add_option("--seed", o.seed)->capture_default_str();
    gen->add_flag("--symmetric", o.symmetric, "equal-size groups");
    gen->add_option("--output", o.output, "instance path (stdout when omitted)");

    auto* eval = app.add_subcommand("eval", "Costs of all alternatives");
    eval->add_option("--input", o.input)->required();
    add_objective(eval);

    auto* run = app.add_subcommand("run", "Run one mechanism");
    run->add_option("--input", o.input)->required();
    run->add_option("--mechanism", o.mechanisms)->required();
    add_objective(run);

    auto* lower = app.add_subcommand("lowerbound", "Generate and verify a lower-bound family");
    lower->add_option("--family", o.family)->required();
    lower->add_option("--lambda", o.lambda, "group size parameter");
    lower->add_option("--k", o.family_k, "number of groups");
    lower->add_option("--epsilon", o.epsilon);
    lower->add_option("--output", o.output, "instance path (default <family>.json)");
    lower->add_flag("--no-write", o.no_write, "skip writing the instance file");
    lower->add_option("--tolerance", o.tolerance)->capture_default_str();

    auto* audit = app.add_subcommand("audit", "Adversarial worst case for a winner");
    audit->add_option("--input", o.input)->required();
    audit->add_option("--mode", o.mode, "worst-grouping | lp | grid")->required();
    audit->add_option("--mechanism", o.mechanisms);
    audit->add_option("--winner", o.winner);
    add_objective(audit);
    audit->add_option("--k", o.audit_k, "groups (worst-grouping)");
    audit->add_flag("--symmetric-only", o.symmetric_only, "equal-size groupings only (worst-grouping)");
    audit->add_flag("--pin-alternatives", o.pin_alternatives, "keep the input's alternative distances (lp)");
    audit->add_option("--grid-step", o.grid_step)->capture_default_str();
    audit->add_option("--grid-span", o.grid_span)->capture_default_str();
    audit->add_option("--output", o.output, "witness path");
    audit->add_option("--tolerance", o.tolerance);

    auto* sweep = app.add_subcommand("sweep", "Seeded experiment over random instances");
    sweep->add_option("--config", o.config, "JSON config; flags override it");
    sweep->add_option("--seed", o.seed);
    sweep->add_option("--trials", o.trials);
    sweep->add_option("--n", o.n_range, "N or LO:HI");
    sweep->add_option("--m", o.m_range, "N or LO:HI");
    sweep->add_option("--k", o.k_range, "N or LO:HI");
    sweep->add_option("--dim", o.dim_range, "N or LO:HI");
    sweep->add_flag("--symmetric", o.symmetric, "equal-size groups");
    sweep->add_option("--mechanism", o.mechanisms, "ids, comma separated, or all");
    sweep->add_option("--objective", o.objective, "max-of-avg | avg-of-max | both");
    sweep->add_flag("--exploratory", o.exploratory, "allow pairs without a registered bound");
    sweep->add_option("--threads", o.threads);
    sweep->add_option("--tolerance", o.tolerance, "slack on registered bounds");
    sweep->add_option("--output", o.output, "CSV path (stdout when omitted)");
    sweep->add_option("--summary", o.summary, "JSON summary path");

    std::vector<std::string> argv_store{"groupvote"};
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& a : argv_store) argv.push_back(a.data());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        const CLI::App* target = &app;
        for (const auto* s : app.get_subcommands()) target = s;
        out << target->help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        const CLI::App* target = &app;
        for (const auto* s : app.get_subcommands()) target = s;
        err << target->help();
        return kExitUsage;
    }

    try {
        if (app.got_subcommand(gen)) return cmd_gen(o, out);
        if (app.got_subcommand(eval)) return cmd_eval(o, out);
        if (app.got_subcommand(run)) return cmd_run(o, out);
        if (app.got_subcommand(lower)) return cmd_lowerbound(o, out, err);
        if (app.got_subcommand(audit)) return cmd_audit(o, out);
        if (app.got_subcommand(sweep)) return cmd_sweep(o, *sweep, out);
    } catch (const InvariantViolation& e) {
        err << "invariant failure: " << e.what() << "\n";
        return kExitInvariant;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "invariant failure: " << e.what() << "\n";
        return kExitInvariant;
    }
    return kExitUsage;
}

}  // namespace groupvote
