#include "groupvote/partitions.hpp"

#include <limits>

#include "groupvote/errors.hpp"

namespace groupvote {

namespace {

constexpr uint128 kMax = std::numeric_limits<uint128>::max();

uint128 checked_mul(uint128 a, uint128 b) {
    if (a != 0 && b > kMax / a) throw Error("partition count overflows 128 bits");
    return a * b;
}

uint128 checked_add(uint128 a, uint128 b) {
    if (b > kMax - a) throw Error("partition count overflows 128 bits");
    return a + b;
}

// Depth-first generation of restricted growth strings.
class PartitionWalker {
public:
    PartitionWalker(std::size_t n, std::size_t k, std::size_t cap,
                    const std::function<bool(const std::vector<std::size_t>&)>& visit)
        : n_(n), k_(k), cap_(cap), visit_(visit), labels_(n), sizes_(k, 0) {}

    std::uint64_t run() {
        if (k_ == 0 || k_ > n_) return 0;
        step(0, 0);
        return count_;
    }

private:
    // Returns false once the visitor asked to stop.
    bool step(std::size_t i, std::size_t used) {
        if (i == n_) {
            if (used != k_) return true;
            ++count_;
            return visit_(labels_);
        }
        const std::size_t remaining = n_ - i;
        // Need at least (k - used) items left to open the missing blocks.
        const std::size_t last = used < k_ ? used : k_ - 1;
        for (std::size_t b = 0; b <= last; ++b) {
            const bool opens = b == used;
            if (!opens && remaining - 1 < k_ - used) continue;
            if (sizes_[b] >= cap_) continue;
            labels_[i] = b;
            ++sizes_[b];
            const bool keep_going = step(i + 1, opens ? used + 1 : used);
            --sizes_[b];
            if (!keep_going) return false;
        }
        return true;
    }

    std::size_t n_;
    std::size_t k_;
    std::size_t cap_;
    const std::function<bool(const std::vector<std::size_t>&)>& visit_;
    std::vector<std::size_t> labels_;
    std::vector<std::size_t> sizes_;
    std::uint64_t count_ = 0;
};

}  // namespace

uint128 stirling2(std::size_t n, std::size_t k) {
    if (k > n) return 0;
    if (n == 0) return 1;  // S(0,0)
    if (k == 0) return 0;
    // row[j] = S(i, j)
    std::vector<uint128> row(k + 1, 0);
    row[0] = 1;
    for (std::size_t i = 1; i <= n; ++i) {
        for (std::size_t j = std::min(i, k); j >= 1; --j) {
            row[j] = checked_add(checked_mul(j, row[j]), row[j - 1]);
        }
        row[0] = 0;
    }
    return row[k];
}

uint128 equal_partition_count(std::size_t n, std::size_t k) {
    if (k == 0 || n % k != 0) return 0;
    const std::size_t lambda = n / k;
    // n! / (lambda!^k k!) built as a product of binomials C(r*lambda - 1, lambda - 1).
    uint128 total = 1;
    for (std::size_t r = 1; r <= k; ++r) {
        const std::size_t top = r * lambda - 1;
        uint128 binom = 1;
        for (std::size_t t = 1; t < lambda; ++t) {
            binom = checked_mul(binom, top - t + 1) / t;
        }
        total = checked_mul(total, binom);
    }
    return total;
}

std::uint64_t for_each_set_partition(std::size_t n, std::size_t k,
                                     const std::function<bool(const std::vector<std::size_t>&)>& visit) {
    return PartitionWalker(n, k, n, visit).run();
}

std::uint64_t for_each_equal_partition(std::size_t n, std::size_t k,
                                       const std::function<bool(const std::vector<std::size_t>&)>& visit) {
    if (k == 0 || n % k != 0) return 0;
    return PartitionWalker(n, k, n / k, visit).run();
}

std::vector<std::vector<std::size_t>> blocks_from_labels(const std::vector<std::size_t>& labels, std::size_t k) {
    std::vector<std::vector<std::size_t>> blocks(k);
    for (std::size_t i = 0; i < labels.size(); ++i) blocks.at(labels[i]).push_back(i);
    return blocks;
}

}  // namespace groupvote
