#ifndef MISINFO_RNG_HPP
#define MISINFO_RNG_HPP

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <utility>

namespace misinfo {

// std::mt19937_64 output is fixed by the standard, but the std distributions
// and std::shuffle are not. Everything seeded in this project goes through
// these helpers so results are identical across standard libraries.
using Rng = std::mt19937_64;

/// Uniform integer in [0, bound) by rejection sampling. bound must be > 0.
inline std::uint64_t uniform_below(Rng &rng, std::uint64_t bound) {
    const std::uint64_t limit = Rng::max() - (Rng::max() % bound);
    std::uint64_t draw = rng();
    while (draw >= limit) {
        draw = rng();
    }
    return draw % bound;
}

/// Fisher-Yates shuffle driven by uniform_below.
template <typename T>
void shuffle_in_place(std::span<T> items, Rng &rng) {
    for (std::size_t i = items.size(); i > 1; --i) {
        const auto j = static_cast<std::size_t>(uniform_below(rng, i));
        std::swap(items[i - 1], items[j]);
    }
}

}  // namespace misinfo

#endif  // MISINFO_RNG_HPP
