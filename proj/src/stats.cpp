#include "fpp/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <boost/math/distributions/chi_squared.hpp>

namespace fpp {

double mean(std::span<const double> xs) {
    if (xs.empty()) throw std::invalid_argument("mean of an empty sample");
    return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

double std_error(std::span<const double> xs) {
    if (xs.size() < 2) return 0.0;
    const double m = mean(xs);
    double ss = 0.0;
    for (double x : xs) ss += (x - m) * (x - m);
    const auto n = static_cast<double>(xs.size());
    return std::sqrt(ss / (n - 1.0) / n);
}

double median_of_means(std::span<const double> xs, std::size_t groups) {
    if (xs.empty()) throw std::invalid_argument("median of means of an empty sample");
    groups = std::clamp<std::size_t>(groups, 1, xs.size());
    std::vector<double> means;
    std::size_t start = 0;
    for (std::size_t g = 0; g < groups; ++g) {
        const std::size_t end = (g + 1) * xs.size() / groups;
        means.push_back(mean(xs.subspan(start, end - start)));
        start = end;
    }
    std::sort(means.begin(), means.end());
    const std::size_t h = means.size() / 2;
    return means.size() % 2 ? means[h] : 0.5 * (means[h - 1] + means[h]);
}

LineFit least_squares(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("least squares needs two or more matched points");
    const double mx = mean(x);
    const double my = mean(y);
    double sxy = 0.0;
    double sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    if (sxx == 0.0) throw std::invalid_argument("least squares needs distinct x values");
    const double slope = sxy / sxx;
    return {slope, my - slope * mx};
}

double chi_square_pvalue(double statistic, double dof) {
    return boost::math::cdf(boost::math::complement(boost::math::chi_squared(dof), statistic));
}

double chi_square_gof_pvalue(std::span<const std::uint64_t> counts,
                             std::span<const double> probabilities) {
    if (counts.size() != probabilities.size() || counts.size() < 2)
        throw std::invalid_argument("goodness of fit needs two or more matched cells");
    const double total =
        static_cast<double>(std::accumulate(counts.begin(), counts.end(), std::uint64_t{0}));
    double stat = 0.0;
    for (std::size_t i = 0; i < counts.size(); ++i) {
        const double e = total * probabilities[i];
        const double d = static_cast<double>(counts[i]) - e;
        stat += d * d / e;
    }
    return chi_square_pvalue(stat, static_cast<double>(counts.size() - 1));
}

}  // namespace fpp
