#pragma once

#include <functional>
#include <map>
#include <vector>

#include "fjrw/rational.hpp"

namespace fjrw {

/// Multiset over an ordered value set, value -> multiplicity (> 0).
template <typename V> using Multiset = std::map<V, int>;

template <typename V> inline int multiset_size(const Multiset<V>& m) {
    int n = 0;
    for (const auto& [v, k] : m) n += k;
    return n;
}

/// prod multiplicity! — the automorphism factor of a multiset.
template <typename V> inline Int multiset_aut(const Multiset<V>& m) {
    Int a = 1;
    for (const auto& [v, k] : m) a *= factorial(static_cast<unsigned>(k));
    return a;
}

template <typename V> inline std::vector<V> multiset_to_vector(const Multiset<V>& m) {
    std::vector<V> out;
    for (const auto& [v, k] : m)
        for (int i = 0; i < k; ++i) out.push_back(v);
    return out;
}

/// Enumerates all multisets drawn from `values` with size in [1, max_size],
/// in deterministic order.
template <typename V>
inline void for_each_multiset(const std::vector<V>& values, int max_size,
                              const std::function<void(const Multiset<V>&)>& fn) {
    Multiset<V> current;
    std::function<void(std::size_t, int)> rec = [&](std::size_t i, int remaining) {
        if (i == values.size()) {
            if (!current.empty()) fn(current);
            return;
        }
        rec(i + 1, remaining); // multiplicity 0
        for (int k = 1; k <= remaining; ++k) {
            current[values[i]] = k;
            rec(i + 1, remaining - k);
        }
        current.erase(values[i]);
    };
    rec(0, max_size);
}

/// Enumerates all set partitions of {0,...,n-1} as block lists. Blocks and
/// the block list itself come out in a deterministic canonical order
/// (restricted-growth-string enumeration).
inline void for_each_set_partition(int n,
                                   const std::function<void(const std::vector<std::vector<int>>&)>& fn) {
    std::vector<std::vector<int>> blocks;
    std::function<void(int)> rec = [&](int i) {
        if (i == n) {
            fn(blocks);
            return;
        }
        const std::size_t existing = blocks.size();
        for (std::size_t j = 0; j < existing; ++j) {
            blocks[j].push_back(i);
            rec(i + 1);
            blocks[j].pop_back();
        }
        blocks.push_back({i});
        rec(i + 1);
        blocks.pop_back();
    };
    rec(0);
}

/// Enumerates ordered sequences over {1..r} of the given length.
inline void for_each_sequence(int r, int length,
                              const std::function<void(const std::vector<int>&)>& fn) {
    std::vector<int> seq(length, 1);
    std::function<void(int)> rec = [&](int pos) {
        if (pos == length) {
            fn(seq);
            return;
        }
        for (int b = 1; b <= r; ++b) {
            seq[pos] = b;
            rec(pos + 1);
        }
    };
    rec(0);
}

} // namespace fjrw
