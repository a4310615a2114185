#pragma once

#include <cstdint>
#include <random>

namespace orghier {

// std::uniform_*_distribution output is implementation-defined, which breaks
// the bit-reproducibility contract across standard libraries. These helpers
// consume mt19937_64 output directly and are stable everywhere.

inline double rng_unit(std::mt19937_64& rng) {
    // 53 random bits in [0, 1)
    return static_cast<double>(rng() >> 11) * (1.0 / 9007199254740992.0);
}

inline std::size_t rng_index(std::mt19937_64& rng, std::size_t n) {
    // Rejection-free threshold trick (Lemire); n is tiny here so the
    // multiply-shift split is unbiased enough and, above all, deterministic.
    return static_cast<std::size_t>((static_cast<unsigned __int128>(rng()) * n) >> 64);
}

template <typename T>
void rng_shuffle(std::mt19937_64& rng, std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
        std::size_t j = rng_index(rng, i);
        std::swap(v[i - 1], v[j]);
    }
}

}  // namespace orghier
