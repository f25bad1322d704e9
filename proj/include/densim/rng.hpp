// SPDX-License-Identifier: MIT
#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace densim {

/// Seedable, portable RNG: the std::mt19937_64 stream is fixed by the
/// standard, and the uniform double uses the top 53 bits directly, so
/// counts are bit-reproducible across platforms. The identifier below is
/// recorded in output metadata.
class Rng {
public:
    static constexpr std::string_view algorithm_id = "mt19937_64+u53";

    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t next_u64() { return eng_(); }

    /// Uniform double in [0, 1).
    double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    /// splitmix64 mix of a base seed and a stream index; used to derive
    /// independent per-record seeds deterministically.
    static std::uint64_t derive(std::uint64_t seed, std::uint64_t stream) {
        std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

private:
    std::mt19937_64 eng_;
};

}  // namespace densim
