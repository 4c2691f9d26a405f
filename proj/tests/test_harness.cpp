#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "fpp/geodesic.hpp"
#include "fpp/harness.hpp"
#include "fpp/parallel.hpp"
#include "fpp/stats.hpp"

using namespace fpp;

namespace {

struct CliRun {
    int code = 0;
    std::string out;
    std::string err;
};

CliRun cli(std::vector<std::string> args) {
    std::vector<const char*> argv{"fpplab"};
    for (const std::string& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = cli_dispatch(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string temp_path(const std::string& name) {
    const char* dir = std::getenv("TMPDIR");
    return std::string(dir ? dir : "/tmp") + "/fpplab_test_" + name;
}

// Runs the installed binary through the shell and captures stdout.
CliRun shell(const std::string& command) {
    CliRun r;
    std::unique_ptr<FILE, int (*)(FILE*)> pipe(popen((command + " 2>/dev/null").c_str(), "r"), pclose);
    REQUIRE(pipe);
    std::array<char, 4096> buf{};
    std::size_t got;
    while ((got = std::fread(buf.data(), 1, buf.size(), pipe.get())) > 0) r.out.append(buf.data(), got);
    const int status = pclose(pipe.release());
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

}  // namespace

TEST_CASE("straight line weight") {
    CHECK(straight_line_weight(5, 0.0, 3, 7) == 32.0);
    CHECK_THROWS(straight_line_weight(3, 1.0, 0, 8));

    std::vector<double> xs;
    for (std::uint64_t seed = 0; seed < 10000; ++seed) xs.push_back(straight_line_weight(6, 1.0, seed, 11));
    const double target = 64.0 * std::exp(3.0);
    CHECK(std::abs(median_of_means(xs) / target - 1.0) < 0.05);
}

TEST_CASE("a row never beats the geodesic") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const FieldSample f = sample_field({FieldKind::Brw, 4, 1, {0, 0}}, GaussianSource{seed});
        const WeightGrid g = make_weight_grid(f, 1.0);
        const double d = crossing_distance(g, g.region, Direction::LeftRight).weight;
        for (std::int64_t row = 0; row < 16; ++row) CHECK(d <= straight_line_weight(4, 1.0, seed, row));
    }
}

TEST_CASE("min of two normals") {
    const ToyEstimate t = check_min_toy(200000, 5);
    CHECK(std::abs(t.mean + 1.0 / std::sqrt(M_PI)) < 4 * t.std_error);
    CHECK(t.std_error > 0.0);
    CHECK_THROWS(check_min_toy(10, 0));
}

TEST_CASE("lemma sweep") {
    const Lemma1Report small = check_lemma1(2, 3, 100000, 0);
    CHECK(small.pairs == 48 * 48);
    CHECK(small.max_deviation < 1e-9);
    const Lemma1Report zero = check_lemma1(0, 3, 10, 0);
    CHECK(zero.max_deviation == 0.0);
    const Lemma1Report sampled = check_lemma1(4, 3, 2000, 9);
    CHECK(sampled.pairs == 2000);
    CHECK(sampled.max_deviation < 1e-9);
}

TEST_CASE("exponent at unit weights") {
    ExperimentConfig c;
    c.gamma = 0.0;
    c.n_min = 2;
    c.n_max = 6;
    c.replicates = 16;
    const ExponentFit fit = run_exponent(c);
    CHECK(fit.slope == doctest::Approx(1.0).epsilon(1e-12));
    for (const ExponentRow& row : fit.rows) {
        for (double d : row.samples) CHECK(d == static_cast<double>(row.side));
        CHECK(row.row_violations == 0);
        CHECK(row.std_error == 0.0);
    }
}

TEST_CASE("exponent aggregates do not depend on the thread count") {
    ExperimentConfig c;
    c.n_min = 3;
    c.n_max = 5;
    c.replicates = 32;
    c.seed = 4;
    c.exec = Exec::Serial;
    const ExponentFit serial = run_exponent(c);
    c.exec = Exec::Parallel;
    set_thread_count(3);
    const ExponentFit parallel = run_exponent(c);
    set_thread_count(1);
    std::ostringstream a, b;
    write_exponent_csv(a, serial);
    write_exponent_csv(b, parallel);
    CHECK(a.str() == b.str());
    CHECK(exponent_json(serial, c) == exponent_json(parallel, c));
}

TEST_CASE("doubling replicates shrinks the standard error") {
    ExperimentConfig c;
    c.n_min = c.n_max = 3;
    c.gamma = 0.3;
    c.replicates = 2000;
    const double se1 = run_exponent(c).rows[0].std_error;
    c.replicates = 4000;
    c.seed = 1;
    const double se2 = run_exponent(c).rows[0].std_error;
    CHECK(se1 / se2 == doctest::Approx(std::sqrt(2.0)).epsilon(0.15));
}

TEST_CASE("csv schema") {
    ExperimentConfig c;
    c.n_min = 2;
    c.n_max = 3;
    c.replicates = 4;
    std::ostringstream os;
    write_exponent_csv(os, run_exponent(c));
    const std::string s = os.str();
    CHECK(s.rfind("n,side,replicates,mean,stderr,median_of_means,row_violations\n", 0) == 0);
    CHECK(std::count(s.begin(), s.end(), '\n') == 3);
}

TEST_CASE("config validation") {
    ExperimentConfig c;
    c.n_max = 14;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c = {};
    c.n_min = 6;
    c.n_max = 5;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
}

TEST_CASE("cli usage errors") {
    CHECK(cli({}).code == 2);
    const CliRun unknown = cli({"exponent", "--bogus"});
    CHECK(unknown.code == 2);
    CHECK(!unknown.err.empty());
    CHECK(cli({"exponent", "--n", "9..4"}).code == 2);
    CHECK(cli({"--help"}).code == 0);
}

TEST_CASE("cli outputs are deterministic") {
    const std::string csv1 = temp_path("a.csv"), csv2 = temp_path("b.csv");
    const std::vector<std::string> args{"exponent", "--gamma", "1.0", "--n", "3..5", "--reps", "20", "--seed", "7"};
    auto with = [&](const std::string& path) {
        std::vector<std::string> a = args;
        a.push_back("--csv");
        a.push_back(path);
        return a;
    };
    REQUIRE(cli(with(csv1)).code == 0);
    REQUIRE(cli(with(csv2)).code == 0);
    CHECK(slurp(csv1) == slurp(csv2));
    CHECK(!slurp(csv1).empty());

    const CliRun j1 = cli({"construct", "--n", "4", "--seed", "3", "--json"});
    const CliRun j2 = cli({"construct", "--n", "4", "--seed", "3", "--json"});
    CHECK(j1.code == 0);
    CHECK(j1.out == j2.out);
    const CliRun r1 = cli({"rtv", "--lambda", "0.1,0.5", "--grid", "1000", "--reps", "10", "--seed", "1"});
    CHECK(r1.code == 0);
    CHECK(std::count(r1.out.begin(), r1.out.end(), '\n') == 3);
    std::remove(csv1.c_str());
    std::remove(csv2.c_str());
}

TEST_CASE("cli binary is thread-count invariant") {
    const std::string bin = FPPLAB_CLI;
    const std::string cmd = " exponent --gamma 0.8 --n 3..5 --reps 24 --seed 2 --json /dev/stdout";
    const CliRun one = shell("FPP_THREADS=1 " + bin + cmd);
    const CliRun four = shell("FPP_THREADS=4 " + bin + cmd);
    CHECK(one.code == 0);
    CHECK(one.out == four.out);
    CHECK(!one.out.empty());
    CHECK(shell(bin).code == 2);
    CHECK(shell(bin + " check-cov --n 2 --gamma-cells 3").code == 0);
}
