#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "groupvote/adversary.hpp"
#include "groupvote/cli.hpp"
#include "groupvote/core.hpp"
#include "groupvote/instance_io.hpp"
#include "groupvote/mechanisms.hpp"
#include "groupvote/objectives.hpp"

namespace py = pybind11;
using namespace groupvote;

namespace {

Objective objective_arg(const std::string& s) { return parse_objective(s); }

std::vector<std::vector<double>> rows_of(const Instance& inst) {
    std::vector<std::vector<double>> out;
    for (std::size_t p = 0; p < inst.points(); ++p) {
        const auto r = inst.row(p);
        out.emplace_back(r.begin(), r.end());
    }
    return out;
}

py::dict report_dict(const DistortionReport& r) {
    py::dict d;
    d["winner"] = r.winner;
    d["winner_cost"] = r.winner_cost;
    d["opt"] = r.opt;
    d["opt_cost"] = r.opt_cost;
    d["ratio"] = r.ratio;
    d["unbounded"] = r.unbounded;
    return d;
}

}  // namespace

PYBIND11_MODULE(_groupvote, mod) {
    mod.doc() = "Group-fair metric voting: objectives, mechanisms, lower bounds, audits";

    static py::exception<Error> base(mod, "GroupvoteError", PyExc_ValueError);
    static py::exception<InvariantViolation> invariant(mod, "InvariantViolation", base.ptr());
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const InvariantViolation& e) {
            invariant(e.what());
        } catch (const Error& e) {
            base(e.what());
        }
    });

    py::class_<Instance>(mod, "Instance")
        .def(py::init<std::size_t, std::size_t, const std::vector<std::vector<double>>&>(), py::arg("n"),
             py::arg("m"), py::arg("dist"))
        .def_static("on_line",
                    [](const std::vector<double>& agents, const std::vector<double>& alts) {
                        return Instance::on_line(agents, alts);
                    })
        .def_property_readonly("n", &Instance::agents)
        .def_property_readonly("m", &Instance::alternatives)
        .def("agent_alt", &Instance::agent_alt)
        .def("dist", &rows_of)
        .def("is_metric", [](const Instance& i, double tol) { return validate_instance(i, tol).ok(); },
             py::arg("tol") = kDefaultMetricTolerance)
        .def("profile", [](const Instance& i) { return ordinal_profile_from_instance(i).rankings(); });

    py::class_<Grouping>(mod, "Grouping")
        .def(py::init<std::vector<std::vector<std::size_t>>, std::size_t>(), py::arg("groups"), py::arg("n"))
        .def_property_readonly("groups", &Grouping::groups)
        .def_property_readonly("symmetric", &Grouping::symmetric)
        .def("__len__", &Grouping::size);

    mod.def("cost", [](const Instance& i, const Grouping& g, const std::string& obj, std::size_t x) {
        return cost(i, g, objective_arg(obj), x);
    });
    mod.def("distortion", [](const Instance& i, const Grouping& g, const std::string& obj, std::size_t w) {
        return report_dict(distortion(i, g, objective_arg(obj), w));
    });
    mod.def("select_winner", [](const std::string& mech, const Instance& i, const Grouping& g) {
        return select_winner(parse_mechanism(mech), i, g);
    });
    mod.def(
        "lower_bound",
        [](const std::string& family, std::optional<std::size_t> lambda, std::optional<std::size_t> k,
           std::optional<double> epsilon) {
            const LowerBoundInstance lb = make_lower_bound(parse_family(family), FamilyParams{lambda, k, epsilon});
            return py::make_tuple(lb.inst, lb.grp, lb.adversarial_winner, std::string(to_string(lb.objective)),
                                  lb.predicted_ratio);
        },
        py::arg("family"), py::arg("lambda_") = py::none(), py::arg("k") = py::none(),
        py::arg("epsilon") = py::none());
    mod.def(
        "lp_worst_ratio",
        [](const std::vector<std::vector<std::size_t>>& rankings, std::size_t m, const Grouping& g, std::size_t w,
           const std::string& obj) {
            return lp_worst_metric(OrdinalProfile(m, rankings), g, w, objective_arg(obj)).ratio;
        },
        py::arg("rankings"), py::arg("m"), py::arg("grouping"), py::arg("winner"), py::arg("objective"));
    mod.def("parse_instance", [](const std::string& text) {
        InstanceFile f = parse_instance(text);
        return py::make_tuple(f.instance, f.grouping);
    });
    mod.def("format_instance", [](const Instance& i, std::optional<Grouping> g) {
        return format_instance(i, g ? &*g : nullptr);
    }, py::arg("instance"), py::arg("grouping") = py::none());
    mod.def("cli", [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        const int code = run_cli(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
    });
}
