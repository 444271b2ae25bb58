#pragma once

#include <cstdint>
#include <string_view>

namespace bcp {

inline constexpr std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline constexpr std::uint64_t fnv1a(std::string_view s)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : s) { h ^= ch; h *= 0x100000001b3ULL; }
    return h;
}

/// Counter-based stream: draw k of sample i depends only on (seed, check_id, i, k).
class CounterRng {
    std::uint64_t key_;
public:
    CounterRng(std::uint64_t seed, std::string_view check_id) : key_(splitmix64(seed ^ splitmix64(fnv1a(check_id)))) {}

    std::uint64_t bits(std::uint64_t index, std::uint64_t k) const
    { return splitmix64(key_ ^ splitmix64(index * 0x100000001b3ULL + k)); }

    /// uniform in [0,1)
    double uniform(std::uint64_t index, std::uint64_t k) const
    { return static_cast<double>(bits(index, k) >> 11) * 0x1.0p-53; }

    double uniform(std::uint64_t index, std::uint64_t k, double lo, double hi) const
    { return lo + (hi - lo) * uniform(index, k); }
};

}
