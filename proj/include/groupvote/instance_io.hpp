#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "groupvote/core.hpp"

namespace groupvote {

struct InstanceFile {
    Instance instance;
    std::optional<Grouping> grouping;
};

// Instance file format:
//   {"n": int, "m": int, "dist": [[real; n+m]; n+m], "groups": [[int]] (optional)}
// Reals are written with 17 significant digits so a save/load cycle is
// bit-exact.
InstanceFile parse_instance(const std::string& text);
InstanceFile load_instance(const std::filesystem::path& path);

std::string format_instance(const Instance& inst, const Grouping* grouping = nullptr);
void write_instance(std::ostream& os, const Instance& inst, const Grouping* grouping = nullptr);
void save_instance(const std::filesystem::path& path, const Instance& inst, const Grouping* grouping = nullptr);

// 17 significant digits, "inf"/"-inf"/"nan" for non-finite values.
std::string format_real(double value);

}  // namespace groupvote
