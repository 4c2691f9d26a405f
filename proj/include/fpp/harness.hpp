#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "fpp/field.hpp"

namespace fpp {

struct ExperimentConfig {
    double gamma = 1.0;
    int gamma_cells = 1;
    int n_min = 4;
    int n_max = 8;
    std::size_t replicates = 50;
    std::uint64_t seed = 0;
    FieldKind kind = FieldKind::Brw;
    Exec exec = Exec::Parallel;
    std::size_t bootstrap = 1000;
    std::size_t groups = 16;

    void validate() const;
};

inline constexpr int kExponentMaxLevel = 13;

struct ExponentRow {
    int n = 0;
    std::int64_t side = 0;
    std::size_t replicates = 0;
    double mean = 0.0;
    double std_error = 0.0;
    double median_of_means = 0.0;
    std::size_t row_violations = 0;  // samples whose crossing beat no row bound
    std::vector<double> samples;
};

struct ExponentFit {
    double slope = 0.0;
    double intercept = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    std::vector<ExponentRow> rows;
};

// Samples D_{gamma,LR} over n_min..n_max; the fit regresses log2 of the
// median of means on n.
ExponentFit run_exponent(const ExperimentConfig& config);

// Sum of e^{gamma R_z} along row `row` of a BRW sample.
double straight_line_weight(int n, double gamma, std::uint64_t seed, std::int64_t row);

struct ToyEstimate {
    double mean = 0.0;
    double std_error = 0.0;
};

// Monte Carlo E min(X, Y) for independent standard normals.
ToyEstimate check_min_toy(std::size_t reps, std::uint64_t seed);

struct Lemma1Report {
    int n = 0;
    int gamma_cells = 0;
    std::size_t pairs = 0;
    double max_deviation = 0.0;
};

// Exact covariance of TildeChi against ConcatBrw at `pairs` random point
// pairs (all pairs when that is fewer).
Lemma1Report check_lemma1(int n, int gamma_cells, std::size_t pairs, std::uint64_t seed);

void write_exponent_csv(std::ostream& os, const ExponentFit& fit);
std::string exponent_json(const ExponentFit& fit, const ExperimentConfig& config);

// Full command line front end; returns the process exit code.
int cli_dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace fpp
