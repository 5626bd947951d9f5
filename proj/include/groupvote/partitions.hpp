#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

namespace groupvote {

using uint128 = unsigned __int128;

// Stirling number of the second kind S(n, k). Throws Error on overflow.
uint128 stirling2(std::size_t n, std::size_t k);

// Number of ways to split n labelled items into k unlabelled blocks of
// size n/k each (0 if k does not divide n).
uint128 equal_partition_count(std::size_t n, std::size_t k);

/// Visits every set partition of {0..n-1} into exactly k non-empty blocks.
/// The callback receives a restricted growth string: label[i] is the block
/// of item i, blocks numbered by first appearance. Returning false stops the
/// enumeration early. Returns the number of partitions visited.
std::uint64_t for_each_set_partition(std::size_t n, std::size_t k,
                                     const std::function<bool(const std::vector<std::size_t>&)>& visit);

/// Same, restricted to partitions whose blocks all have size n/k.
std::uint64_t for_each_equal_partition(std::size_t n, std::size_t k,
                                       const std::function<bool(const std::vector<std::size_t>&)>& visit);

// Converts a restricted growth string into explicit blocks.
std::vector<std::vector<std::size_t>> blocks_from_labels(const std::vector<std::size_t>& labels, std::size_t k);

}  // namespace groupvote
