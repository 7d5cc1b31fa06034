#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <span>
#include <string>
#include <vector>

namespace ncorlicz {

// Correctly rounded sum of doubles (Shewchuk partials, same scheme as
// Python's fsum). The result depends only on the multiset of inputs, not
// on their order, which keeps sign-enumeration averages bit-stable under
// permutations of the operator sequence.
inline double exact_sum(std::span<const double> xs) {
    std::vector<double> partials;
    partials.reserve(16);
    for (double x : xs) {
        std::size_t i = 0;
        for (std::size_t j = 0; j < partials.size(); ++j) {
            double y = partials[j];
            if (std::fabs(x) < std::fabs(y)) std::swap(x, y);
            const double hi = x + y;
            const double lo = y - (hi - x);
            if (lo != 0.0) partials[i++] = lo;
            x = hi;
        }
        partials.resize(i);
        partials.push_back(x);
    }
    if (partials.empty()) return 0.0;

    // Round the exact value represented by the partials to one double,
    // with the half-even correction against double rounding.
    std::size_t n = partials.size();
    double hi = partials[--n];
    double lo = 0.0;
    std::size_t j = n;
    while (j > 0) {
        const double x = hi;
        const double y = partials[--j];
        hi = x + y;
        const double yr = hi - x;
        lo = y - yr;
        if (lo != 0.0) break;
    }
    if (lo != 0.0 && j > 0 &&
        ((lo < 0.0 && partials[j - 1] < 0.0) || (lo > 0.0 && partials[j - 1] > 0.0))) {
        const double y = lo * 2.0;
        const double x = hi + y;
        if (y == (x - hi)) hi = x;
    }
    return hi;
}

// splitmix64 finalizer; used to derive per-sample counter-based streams.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

inline std::uint64_t hash_string(const std::string& s) {
    // FNV-1a
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

// 17 significant digits: strtod round-trips the exact bit pattern.
inline std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return std::string(buf);
}

inline double median_of(std::vector<double> v) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    if (n % 2 == 1) return v[n / 2];
    return 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace ncorlicz
