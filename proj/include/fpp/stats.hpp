#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace fpp {

double mean(std::span<const double> xs);
// Standard error of the mean; 0 for fewer than two values.
double std_error(std::span<const double> xs);

// Median of the means of `groups` contiguous groups (sizes differ by at most one).
double median_of_means(std::span<const double> xs, std::size_t groups = 16);

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
};

// Unweighted least squares y = slope x + intercept.
LineFit least_squares(std::span<const double> x, std::span<const double> y);

// Upper-tail probability of a chi-square statistic.
double chi_square_pvalue(double statistic, double dof);

// Pearson goodness-of-fit against the given expected probabilities.
double chi_square_gof_pvalue(std::span<const std::uint64_t> counts,
                             std::span<const double> probabilities);

}  // namespace fpp
