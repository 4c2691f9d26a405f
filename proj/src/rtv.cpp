#include "fpp/rtv.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fpp/parallel.hpp"

namespace fpp {

double partition_value(std::span<const double> path, std::span<const std::size_t> breakpoints,
                       double lambda) {
    double total = 0.0;
    for (std::size_t r = 0; r + 1 < breakpoints.size(); ++r)
        total += std::abs(path[breakpoints[r + 1]] - path[breakpoints[r]]);
    const std::size_t switches = breakpoints.size() >= 2 ? breakpoints.size() - 2 : 0;
    return total - lambda * static_cast<double>(switches);
}

namespace {

void check_input(std::span<const double> path, double lambda) {
    if (path.size() < 2) throw std::invalid_argument("a sampled path needs m >= 1");
    if (!(lambda > 0.0)) throw std::invalid_argument("penalty must be positive");
}

RtvPartition finish(std::span<const double> path, std::vector<std::size_t> breakpoints,
                    double lambda) {
    RtvPartition out;
    out.switches = breakpoints.size() - 2;
    out.lambda = lambda;
    out.value = partition_value(path, breakpoints, lambda);
    out.breakpoints = std::move(breakpoints);
    return out;
}

}  // namespace

RtvPartition rtv_dp(std::span<const double> path, double lambda) {
    check_input(path, lambda);
    const std::size_t m = path.size() - 1;

    // best[i]: optimal penalized value over partitions of [0, i] ending at i.
    std::vector<double> best(m + 1, 0.0);
    std::vector<std::size_t> best_k(m + 1, 0);
    std::vector<std::size_t> pred(m + 1, 0);

    auto chain = [&](std::size_t j) {
        std::vector<std::size_t> c;
        for (std::size_t t = j; t > 0; t = pred[t]) c.push_back(t);
        c.push_back(0);
        std::reverse(c.begin(), c.end());
        return c;
    };

    struct Candidate {
        double value;
        std::size_t k;
        std::size_t j;
    };
    // true iff a beats b: larger value, then fewer switches, then earlier chain.
    auto beats = [&](const Candidate& a, const Candidate& b) {
        if (a.value != b.value) return a.value > b.value;
        if (a.k != b.k) return a.k < b.k;
        return chain(a.j) < chain(b.j);
    };

    // Running maxima over j < i of P(j) - s B_j for s = +1 and s = -1, where
    // P(0) = 0 and P(j) = best[j] - lambda otherwise.
    Candidate run[2] = {{-path[0], 0, 0}, {path[0], 0, 0}};
    for (std::size_t i = 1; i <= m; ++i) {
        const Candidate up{path[i] + run[0].value, run[0].k, run[0].j};
        const Candidate down{-path[i] + run[1].value, run[1].k, run[1].j};
        const Candidate& pick = beats(down, up) ? down : up;
        best[i] = pick.value;
        best_k[i] = pick.j == 0 ? 0 : pick.k;
        pred[i] = pick.j;
        if (i == m) break;
        const double p = best[i] - lambda;
        const Candidate next_up{p - path[i], best_k[i] + 1, i};
        const Candidate next_down{p + path[i], best_k[i] + 1, i};
        if (beats(next_up, run[0])) run[0] = next_up;
        if (beats(next_down, run[1])) run[1] = next_down;
    }
    std::vector<std::size_t> bp = chain(m);
    return finish(path, std::move(bp), lambda);
}

RtvPartition rtv_bruteforce(std::span<const double> path, double lambda) {
    check_input(path, lambda);
    const std::size_t m = path.size() - 1;
    if (m > kRtvBruteForceMaxSteps) throw std::invalid_argument("brute force limited to m <= 18");
    const std::size_t interior = m - 1;
    std::vector<std::size_t> best_bp;
    double best_value = 0.0;
    std::vector<std::size_t> bp;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << interior); ++mask) {
        bp.clear();
        bp.push_back(0);
        for (std::size_t t = 1; t <= interior; ++t)
            if (mask >> (t - 1) & 1) bp.push_back(t);
        bp.push_back(m);
        const double v = partition_value(path, bp, lambda);
        bool better = best_bp.empty() || v > best_value;
        if (!better && v == best_value) {
            if (bp.size() != best_bp.size())
                better = bp.size() < best_bp.size();
            else
                better = bp < best_bp;
        }
        if (better) {
            best_value = v;
            best_bp = bp;
        }
    }
    return finish(path, std::move(best_bp), lambda);
}

std::vector<int> rtv_signs(std::span<const double> path, const RtvPartition& partition) {
    const auto& bp = partition.breakpoints;
    std::vector<int> signs;
    for (std::size_t r = 0; r + 1 < bp.size(); ++r) {
        const int s = path[bp[r + 1]] >= path[bp[r]] ? -1 : 1;
        signs.insert(signs.end(), bp[r + 1] - bp[r], s);
    }
    return signs;
}

std::vector<double> brownian_path(const GaussianSource& source, std::size_t steps) {
    std::vector<double> b(steps + 1, 0.0);
    const double scale = 1.0 / std::sqrt(static_cast<double>(steps));
    for (std::size_t i = 1; i <= steps; ++i) {
        const DyadicKey key{KeyKind::BmIncrement, 0, {static_cast<std::int64_t>(i), 0}, 0};
        b[i] = b[i - 1] + scale * source(key);
    }
    return b;
}

std::vector<RtvScalingRow> rtv_scaling(std::span<const double> lambdas, std::size_t steps,
                                       std::size_t reps, std::uint64_t seed) {
    if (reps == 0) throw std::invalid_argument("need at least one replicate");
    const std::size_t nl = lambdas.size();
    std::vector<double> phi(reps * nl);
    std::vector<double> ks(reps * nl);
    const GaussianSource master{seed};
    for_each_index(reps, Exec::Parallel, [&](std::size_t r) {
        const std::vector<double> b = brownian_path(master.derived(0x5254, r), steps);
        for (std::size_t l = 0; l < nl; ++l) {
            const RtvPartition p = rtv_dp(b, lambdas[l]);
            phi[r * nl + l] = p.value;
            ks[r * nl + l] = static_cast<double>(p.switches);
        }
    });
    std::vector<RtvScalingRow> rows;
    for (std::size_t l = 0; l < nl; ++l) {
        double sum = 0.0;
        double sum_k = 0.0;
        for (std::size_t r = 0; r < reps; ++r) {
            sum += phi[r * nl + l];
            sum_k += ks[r * nl + l];
        }
        const double mean = sum / static_cast<double>(reps);
        double ss = 0.0;
        for (std::size_t r = 0; r < reps; ++r) ss += (phi[r * nl + l] - mean) * (phi[r * nl + l] - mean);
        const double se =
            reps > 1 ? std::sqrt(ss / static_cast<double>(reps - 1) / static_cast<double>(reps)) : 0.0;
        rows.push_back({lambdas[l], mean, se, sum_k / static_cast<double>(reps)});
    }
    return rows;
}

}  // namespace fpp
