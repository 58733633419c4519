#pragma once

// Counter-based random numbers: every draw is a pure function of
// (seed, counter, slot), so Monte Carlo runs are reproducible no matter
// how samples are scheduled across workers.

#include <cmath>
#include <cstdint>

namespace pxqama {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

struct CounterRng {
    std::uint64_t seed = 0;

    std::uint64_t bits(std::uint64_t counter, std::uint32_t slot) const {
        return splitmix64(splitmix64(seed ^ (counter * 0xd1342543de82ef95ull)) +
                          slot * 0x9e3779b97f4a7c15ull);
    }

    // uniform in (0, 1]
    double u01(std::uint64_t counter, std::uint32_t slot) const {
        return (static_cast<double>(bits(counter, slot) >> 11) + 1.0) * 0x1p-53;
    }

    // standard normal via Box-Muller (slots `slot` and `slot+1`)
    double normal(std::uint64_t counter, std::uint32_t slot) const {
        const double u1 = u01(counter, slot);
        const double u2 = u01(counter, slot + 1);
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
    }
};

}  // namespace pxqama
