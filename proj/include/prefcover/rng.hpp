#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

namespace prefcover {

// mt19937_64 output is pinned by the standard; the helpers below avoid
// std::uniform_int_distribution and friends, whose mapping is
// implementation-defined, so frozen test expectations stay stable.
using Rng = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Independent stream for sub-task `index` of a seeded run.
inline Rng make_rng(std::uint64_t seed, std::uint64_t index = 0) {
    return Rng(splitmix64(seed ^ splitmix64(index + 1)));
}

// Unbiased integer in [0, n) by rejection.
inline std::uint64_t uniform_below(Rng& rng, std::uint64_t n) {
    if (n == 0) return 0;
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do { x = rng(); } while (x >= limit);
    return x % n;
}

inline double uniform01(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

template <typename T>
void shuffle_vec(std::vector<T>& v, Rng& rng) {
    for (std::size_t i = v.size(); i > 1; --i) {
        std::size_t j = static_cast<std::size_t>(uniform_below(rng, i));
        std::swap(v[i - 1], v[j]);
    }
}

// k distinct values from [0, n), sorted ascending.
inline std::vector<int> sample_without_replacement(Rng& rng, int n, int k) {
    std::vector<int> out;
    out.reserve(k);
    // Floyd's algorithm
    for (int j = n - k; j < n; ++j) {
        int t = static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(j) + 1));
        bool seen = false;
        for (int x : out) if (x == t) { seen = true; break; }
        out.push_back(seen ? j : t);
    }
    std::sort(out.begin(), out.end());
    return out;
}

inline std::vector<int> random_permutation(Rng& rng, int n) {
    std::vector<int> p(n);
    for (int i = 0; i < n; ++i) p[i] = i;
    shuffle_vec(p, rng);
    return p;
}

} // namespace prefcover
