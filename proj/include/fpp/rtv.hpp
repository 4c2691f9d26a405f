#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "fpp/gaussian.hpp"

namespace fpp {

// Breakpoints 0 = t_0 < ... < t_{k+1} = m over the sample grid, with
// value = sum |B_{t_{i+1}} - B_{t_i}| - lambda k.
struct RtvPartition {
    std::vector<std::size_t> breakpoints;
    std::size_t switches = 0;
    double lambda = 0.0;
    double value = 0.0;
};

// Penalized value of a given partition, summed left to right.
double partition_value(std::span<const double> path, std::span<const std::size_t> breakpoints,
                       double lambda);

// Exact maximizer in O(m). Among equal values the partition with fewer
// breakpoints wins, then the lexicographically earliest.
RtvPartition rtv_dp(std::span<const double> path, double lambda);

inline constexpr std::size_t kRtvBruteForceMaxSteps = 18;

// Exhaustive reference over all 2^(m-1) breakpoint subsets; m <= 18.
RtvPartition rtv_bruteforce(std::span<const double> path, double lambda);

// Per grid step i = 1..m: -1 if the covering partition interval rises,
// +1 if it falls (flat intervals count as rising).
std::vector<int> rtv_signs(std::span<const double> path, const RtvPartition& partition);

// Standard Brownian motion on [0, 1] sampled at m + 1 grid times.
std::vector<double> brownian_path(const GaussianSource& source, std::size_t steps);

struct RtvScalingRow {
    double lambda = 0.0;
    double mean_phi = 0.0;
    double stderr_phi = 0.0;
    double mean_k = 0.0;
    double scaled_mean() const { return lambda * mean_phi; }
};

std::vector<RtvScalingRow> rtv_scaling(std::span<const double> lambdas, std::size_t steps,
                                       std::size_t reps, std::uint64_t seed);

}  // namespace fpp
