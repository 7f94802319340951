#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace pacp {

// Binary indexed tree over nonnegative integer weights; supports point
// updates, prefix sums, and sampling by prefix search, all O(log n).
class FenwickTree {
public:
    FenwickTree() = default;
    explicit FenwickTree(std::size_t n) { reset(n); }

    void reset(std::size_t n) {
        n_ = n;
        log_ = 0;
        while ((std::size_t{1} << (log_ + 1)) <= n_) ++log_;
        tree_.assign(n_ + 1, 0);
        total_ = 0;
    }

    std::size_t size() const { return n_; }
    std::int64_t total() const { return total_; }

    void add(std::size_t i, std::int64_t delta) {
        total_ += delta;
        for (std::size_t j = i + 1; j <= n_; j += j & (~j + 1))
            tree_[j] += delta;
    }

    // sum of weights over [0, i]
    std::int64_t prefix(std::size_t i) const {
        std::int64_t s = 0;
        for (std::size_t j = i + 1; j > 0; j -= j & (~j + 1)) s += tree_[j];
        return s;
    }

    // smallest index i with prefix(i) > r; requires 0 <= r < total()
    std::size_t find(std::int64_t r) const {
        if (r < 0 || r >= total_)
            throw std::out_of_range("FenwickTree::find: r outside [0, total)");
        std::size_t pos = 0;
        for (std::size_t step = std::size_t{1} << log_; step > 0; step >>= 1) {
            std::size_t next = pos + step;
            if (next <= n_ && tree_[next] <= r) {
                pos = next;
                r -= tree_[next];
            }
        }
        return pos; // 0-based index of the selected element
    }

private:
    std::size_t n_ = 0;
    unsigned log_ = 0;
    std::vector<std::int64_t> tree_;
    std::int64_t total_ = 0;
};

} // namespace pacp
