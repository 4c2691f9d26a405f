#pragma once

#include <cstdint>

#include "fpp/lattice.hpp"

namespace fpp {

enum class KeyKind : std::uint8_t { Box = 0, StackedRect = 1, BmIncrement = 2 };

// Names one i.i.d. unit Gaussian. Box keys are dyadic boxes of side 2^level,
// StackedRect keys are 2^level x 2^(level+1) rectangles, and BmIncrement keys
// are unit-time increments of the Brownian stream owned by `corner` at
// `level`, with `stream` the time slot.
struct DyadicKey {
    KeyKind kind = KeyKind::Box;
    std::uint32_t level = 0;
    Point corner;
    std::uint64_t stream = 0;

    bool operator==(const DyadicKey&) const = default;
    auto operator<=>(const DyadicKey&) const = default;

    // Checks the alignment rules of Box and StackedRect keys.
    bool aligned() const;
};

std::uint64_t mix64(std::uint64_t x);
std::uint64_t hash_combine(std::uint64_t h, std::uint64_t v);

// Counter-based standard normal: a pure function of (seed, key).
double derive_gaussian(std::uint64_t seed, const DyadicKey& key);

// Inverse standard normal CDF of a 64-bit counter draw, for ad hoc streams.
double gaussian_from_bits(std::uint64_t bits);

struct GaussianSource {
    std::uint64_t master_seed = 0;

    double operator()(const DyadicKey& key) const { return derive_gaussian(master_seed, key); }

    // Independent source for replicate `index` of experiment `tag`.
    GaussianSource derived(std::uint64_t tag, std::uint64_t index) const {
        return {hash_combine(hash_combine(master_seed, tag), index)};
    }
};

}  // namespace fpp
