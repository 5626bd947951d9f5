#include "groupvote/instance_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace groupvote {

namespace {

using nlohmann::json;

const json& require(const json& obj, const char* key) {
    auto it = obj.find(key);
    if (it == obj.end()) throw FormatError("/" + std::string(key), "missing required key \"" + std::string(key) + "\"");
    return *it;
}

std::size_t read_count(const json& obj, const char* key) {
    const json& v = require(obj, key);
    if (!v.is_number_integer() || v.get<long long>() < 0) {
        throw FormatError("/" + std::string(key), "expected a non-negative integer");
    }
    return v.get<std::size_t>();
}

}  // namespace

std::string format_real(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

InstanceFile parse_instance(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw FormatError("byte " + std::to_string(e.byte), std::string("malformed JSON: ") + e.what());
    }
    if (!doc.is_object()) throw FormatError("/", "top level must be an object");

    const std::size_t n = read_count(doc, "n");
    const std::size_t m = read_count(doc, "m");
    const json& dist = require(doc, "dist");
    if (!dist.is_array()) throw FormatError("/dist", "expected an array of rows");
    const std::size_t size = n + m;
    if (dist.size() != size) {
        throw FormatError("/dist", "expected " + std::to_string(size) + " rows, found " + std::to_string(dist.size()));
    }
    std::vector<double> flat;
    flat.reserve(size * size);
    for (std::size_t p = 0; p < size; ++p) {
        const json& row = dist[p];
        const std::string where = "/dist/" + std::to_string(p);
        if (!row.is_array()) throw FormatError(where, "expected an array");
        if (row.size() != size) {
            throw FormatError(where, "expected " + std::to_string(size) + " entries, found " + std::to_string(row.size()));
        }
        for (std::size_t q = 0; q < size; ++q) {
            if (!row[q].is_number()) throw FormatError(where + "/" + std::to_string(q), "expected a number");
            flat.push_back(row[q].get<double>());
        }
    }

    std::optional<Instance> inst;
    try {
        inst.emplace(n, m, std::move(flat));
    } catch (const DimensionError& e) {
        throw FormatError("/", e.what());
    }

    std::optional<Grouping> grouping;
    if (auto it = doc.find("groups"); it != doc.end()) {
        if (!it->is_array()) throw FormatError("/groups", "expected an array of groups");
        std::vector<std::vector<std::size_t>> groups;
        for (std::size_t g = 0; g < it->size(); ++g) {
            const json& members = (*it)[g];
            const std::string where = "/groups/" + std::to_string(g);
            if (!members.is_array()) throw FormatError(where, "expected an array of agent indices");
            auto& out = groups.emplace_back();
            for (std::size_t t = 0; t < members.size(); ++t) {
                if (!members[t].is_number_integer() || members[t].get<long long>() < 0) {
                    throw FormatError(where + "/" + std::to_string(t), "expected a non-negative integer");
                }
                out.push_back(members[t].get<std::size_t>());
            }
        }
        grouping.emplace(std::move(groups), n);  // GroupingError propagates as-is
    }
    return {std::move(*inst), std::move(grouping)};
}

InstanceFile load_instance(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_instance(buf.str());
}

void write_instance(std::ostream& os, const Instance& inst, const Grouping* grouping) {
    const std::size_t size = inst.points();
    os << "{\n  \"n\": " << inst.agents() << ",\n  \"m\": " << inst.alternatives() << ",\n  \"dist\": [\n";
    for (std::size_t p = 0; p < size; ++p) {
        os << "    [";
        for (std::size_t q = 0; q < size; ++q) {
            if (q) os << ", ";
            os << format_real(inst.at(p, q));
        }
        os << (p + 1 < size ? "],\n" : "]\n");
    }
    os << "  ]";
    if (grouping) {
        os << ",\n  \"groups\": [";
        for (std::size_t g = 0; g < grouping->size(); ++g) {
            os << (g ? ", [" : "[");
            const auto& members = (*grouping)[g];
            for (std::size_t t = 0; t < members.size(); ++t) os << (t ? ", " : "") << members[t];
            os << "]";
        }
        os << "]";
    }
    os << "\n}\n";
}

std::string format_instance(const Instance& inst, const Grouping* grouping) {
    std::ostringstream os;
    write_instance(os, inst, grouping);
    return os.str();
}

void save_instance(const std::filesystem::path& path, const Instance& inst, const Grouping* grouping) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    write_instance(out, inst, grouping);
    if (!out) throw Error("write failed for " + path.string());
}

}  // namespace groupvote
