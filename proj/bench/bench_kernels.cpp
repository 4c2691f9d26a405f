// Serial reference against the OpenMP kernels. Usage: bench_kernels [n] [reps]
#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>

#include "fpp/field.hpp"
#include "fpp/geodesic.hpp"
#include "fpp/harness.hpp"
#include "fpp/parallel.hpp"

using namespace fpp;

namespace {

double seconds(const std::function<void()>& fn, int reps) {
    const auto start = std::chrono::steady_clock::now();
    for (int r = 0; r < reps; ++r) fn();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count() / reps;
}

void row(const char* name, double serial, double parallel) {
    std::printf("%-22s %12.6f %12.6f %8.2fx\n", name, serial, parallel, serial / parallel);
}

}  // namespace

int main(int argc, char** argv) {
    const int n = argc > 1 ? std::atoi(argv[1]) : 10;
    const int reps = argc > 2 ? std::atoi(argv[2]) : 5;
    std::printf("threads=%d n=%d reps=%d\n", thread_count(), n, reps);
    std::printf("%-22s %12s %12s %9s\n", "kernel", "serial_s", "parallel_s", "speedup");

    const FieldSpec spec{FieldKind::Chi, n, 3, {0, 0}};
    const GaussianSource src{1};
    row("sample_field", seconds([&] { sample_field(spec, src, Exec::Serial); }, reps),
        seconds([&] { sample_field(spec, src, Exec::Parallel); }, reps));

    const FieldSample f = sample_field(spec, src);
    row("make_weight_grid", seconds([&] { make_weight_grid(f, 1.0, Exec::Serial); }, reps),
        seconds([&] { make_weight_grid(f, 1.0, Exec::Parallel); }, reps));

    ExperimentConfig c;
    c.n_min = c.n_max = std::min(n, 8);
    c.replicates = 32;
    c.bootstrap = 0;
    c.exec = Exec::Serial;
    const double s = seconds([&] { run_exponent(c); }, 1);
    c.exec = Exec::Parallel;
    row("exponent replicates", s, seconds([&] { run_exponent(c); }, 1));
    return 0;
}
