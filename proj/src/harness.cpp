#include "fpp/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>
#include <json.hpp>

#include "fpp/construct.hpp"
#include "fpp/field_io.hpp"
#include "fpp/geodesic.hpp"
#include "fpp/parallel.hpp"
#include "fpp/rtv.hpp"
#include "fpp/stats.hpp"

namespace fpp {

using Json = nlohmann::ordered_json;

void ExperimentConfig::validate() const {
    if (!(gamma >= 0.0)) throw std::invalid_argument("gamma must be nonnegative");
    if (n_min < 1 || n_max < n_min) throw std::invalid_argument("empty or invalid n range");
    if (n_max > kExponentMaxLevel) throw std::invalid_argument("n above the memory guard (13)");
    if (replicates < 1) throw std::invalid_argument("need at least one replicate");
    if (gamma_cells < 1 || gamma_cells % 2 == 0) throw std::invalid_argument("Gamma must be odd");
    if (kind == FieldKind::Brw && gamma_cells != 1) throw std::invalid_argument("Brw needs Gamma = 1");
}

namespace {

constexpr std::uint64_t kExponentTag = 0x4558504f00000000ULL;

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// Deterministic index stream for bootstrap resampling.
std::size_t resample_index(std::uint64_t seed, std::uint64_t counter, std::size_t size) {
    return static_cast<std::size_t>(hash_combine(seed, counter) % size);
}

}  // namespace

ExponentFit run_exponent(const ExperimentConfig& config) {
    config.validate();
    const GaussianSource master{config.seed};
    ExponentFit fit;
    for (int n = config.n_min; n <= config.n_max; ++n) {
        ExponentRow row;
        row.n = n;
        row.side = std::int64_t{1} << n;
        row.replicates = config.replicates;
        row.samples.assign(config.replicates, 0.0);
        std::vector<char> violation(config.replicates, 0);
        const FieldSpec spec{config.kind, n, config.gamma_cells, {0, 0}};
        for_each_index(config.replicates, config.exec, [&](std::size_t r) {
            const GaussianSource src = master.derived(kExponentTag + static_cast<std::uint64_t>(n), r);
            const FieldSample field = sample_field(spec, src, Exec::Serial);
            const WeightGrid grid = make_weight_grid(field, config.gamma, Exec::Serial);
            const double d = crossing_distance(grid, grid.region, Direction::LeftRight).weight;
            row.samples[r] = d;
            for (std::int64_t y = 0; y < grid.region.height; ++y) {
                double line = 0.0;
                for (std::int64_t x = 0; x < grid.region.width; ++x) line += grid.at({x, y});
                if (d > line * (1.0 + 1e-12)) violation[r] = 1;
            }
        });
        row.mean = mean(row.samples);
        row.std_error = std_error(row.samples);
        row.median_of_means = median_of_means(row.samples, config.groups);
        row.row_violations = static_cast<std::size_t>(std::count(violation.begin(), violation.end(), 1));
        fit.rows.push_back(std::move(row));
    }

    std::vector<double> xs;
    std::vector<double> ys;
    for (const ExponentRow& r : fit.rows) {
        xs.push_back(r.n);
        ys.push_back(std::log2(r.median_of_means));
    }
    if (xs.size() >= 2) {
        const LineFit lf = least_squares(xs, ys);
        fit.slope = lf.slope;
        fit.intercept = lf.intercept;
        std::vector<double> slopes;
        std::vector<double> resample;
        std::uint64_t counter = 0;
        const std::uint64_t boot_seed = hash_combine(config.seed, 0x424f4f54);
        for (std::size_t b = 0; b < config.bootstrap; ++b) {
            std::vector<double> by;
            for (const ExponentRow& r : fit.rows) {
                resample.resize(r.samples.size());
                for (double& v : resample)
                    v = r.samples[resample_index(boot_seed, counter++, r.samples.size())];
                by.push_back(std::log2(median_of_means(resample, config.groups)));
            }
            slopes.push_back(least_squares(xs, by).slope);
        }
        if (!slopes.empty()) {
            std::sort(slopes.begin(), slopes.end());
            auto pick = [&](double q) {
                const auto idx = static_cast<std::size_t>(q * static_cast<double>(slopes.size() - 1));
                return slopes[idx];
            };
            fit.ci_low = pick(0.025);
            fit.ci_high = pick(0.975);
        } else {
            fit.ci_low = fit.ci_high = fit.slope;
        }
    } else {
        fit.slope = fit.ci_low = fit.ci_high = 0.0;
    }
    return fit;
}

double straight_line_weight(int n, double gamma, std::uint64_t seed, std::int64_t row) {
    const FieldSpec spec{FieldKind::Brw, n, 1, {0, 0}};
    spec.validate();
    if (row < 0 || row >= spec.side()) throw std::out_of_range("row outside the box");
    const FieldSample field = sample_field(spec, GaussianSource{seed}, Exec::Serial);
    double total = 0.0;
    for (std::int64_t x = 0; x < spec.side(); ++x) total += std::exp(gamma * field.at({x, row}));
    return total;
}

ToyEstimate check_min_toy(std::size_t reps, std::uint64_t seed) {
    if (reps < 10000) throw std::invalid_argument("need at least 10^4 replicates");
    const GaussianSource source{seed};
    double sum = 0.0;
    double sum_sq = 0.0;
    for (std::size_t r = 0; r < reps; ++r) {
        const Point slot{static_cast<std::int64_t>(r), 0};
        const double x = source({KeyKind::BmIncrement, 0, slot, 0});
        const double y = source({KeyKind::BmIncrement, 0, slot, 1});
        const double m = std::min(x, y);
        sum += m;
        sum_sq += m * m;
    }
    const auto n = static_cast<double>(reps);
    const double mu = sum / n;
    const double var = (sum_sq - n * mu * mu) / (n - 1.0);
    return {mu, std::sqrt(var / n)};
}

Lemma1Report check_lemma1(int n, int gamma_cells, std::size_t pairs, std::uint64_t seed) {
    const FieldSpec tilde{FieldKind::TildeChi, n, gamma_cells, {0, 0}};
    const FieldSpec concat{FieldKind::ConcatBrw, n, gamma_cells, {0, 0}};
    tilde.validate();
    const Rect r = tilde.rect();
    const auto points = static_cast<std::uint64_t>(r.area());
    Lemma1Report rep{n, gamma_cells, 0, 0.0};
    auto point_at = [&](std::uint64_t idx) {
        return Point{r.x0 + static_cast<std::int64_t>(idx % static_cast<std::uint64_t>(r.width)),
                     r.y0 + static_cast<std::int64_t>(idx / static_cast<std::uint64_t>(r.width))};
    };
    auto probe = [&](Point a, Point b) {
        rep.max_deviation =
            std::max(rep.max_deviation, std::abs(exact_cov(tilde, a, b) - exact_cov(concat, a, b)));
        ++rep.pairs;
    };
    if (points * points <= pairs) {
        for (std::uint64_t a = 0; a < points; ++a)
            for (std::uint64_t b = 0; b < points; ++b) probe(point_at(a), point_at(b));
    } else {
        const std::uint64_t s = hash_combine(seed, 0x4c454d31);
        for (std::size_t t = 0; t < pairs; ++t)
            probe(point_at(hash_combine(s, 2 * t) % points), point_at(hash_combine(s, 2 * t + 1) % points));
    }
    return rep;
}

void write_exponent_csv(std::ostream& os, const ExponentFit& fit) {
    os << "n,side,replicates,mean,stderr,median_of_means,row_violations\n";
    for (const ExponentRow& r : fit.rows)
        os << r.n << ',' << r.side << ',' << r.replicates << ',' << fmt(r.mean) << ','
           << fmt(r.std_error) << ',' << fmt(r.median_of_means) << ',' << r.row_violations << '\n';
}

std::string exponent_json(const ExponentFit& fit, const ExperimentConfig& config) {
    Json j;
    j["gamma"] = config.gamma;
    j["gamma_cells"] = config.gamma_cells;
    j["kind"] = to_string(config.kind);
    j["n_min"] = config.n_min;
    j["n_max"] = config.n_max;
    j["replicates"] = config.replicates;
    j["seed"] = config.seed;
    j["slope"] = fit.slope;
    j["intercept"] = fit.intercept;
    j["ci_low"] = fit.ci_low;
    j["ci_high"] = fit.ci_high;
    j["bootstrap"] = config.bootstrap;
    Json rows = Json::array();
    for (const ExponentRow& r : fit.rows)
        rows.push_back({{"n", r.n},
                        {"side", r.side},
                        {"mean", r.mean},
                        {"stderr", r.std_error},
                        {"median_of_means", r.median_of_means},
                        {"row_violations", r.row_violations}});
    j["rows"] = std::move(rows);
    return j.dump(2);
}

namespace {

Json path_json(const LatticePath& path) {
    Json a = Json::array();
    for (Point p : path) a.push_back(Json::array({p.x, p.y}));
    return a;
}

// Writes to `path`, or to `out` when the path is empty or "-".
void emit(const std::string& path, const std::string& text, std::ostream& out) {
    if (path.empty() || path == "-") {
        out << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path);
    f << text;
    if (!f) throw std::runtime_error("write failed: " + path);
}

std::pair<int, int> parse_range(const std::string& s) {
    const auto dots = s.find("..");
    try {
        if (dots == std::string::npos) {
            const int v = std::stoi(s);
            return {v, v};
        }
        return {std::stoi(s.substr(0, dots)), std::stoi(s.substr(dots + 2))};
    } catch (const std::exception&) {
        throw CLI::ValidationError("--n", "expected a level or a range a..b");
    }
}

std::vector<double> parse_list(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            out.push_back(std::stod(item));
        } catch (const std::exception&) {
            throw CLI::ValidationError("--lambda", "expected comma-separated numbers");
        }
    }
    if (out.empty()) throw CLI::ValidationError("--lambda", "expected at least one value");
    return out;
}

}  // namespace

int cli_dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Simulation lab for first passage percolation on branching random walk fields",
                 "fpplab"};
    app.require_subcommand(1);
    int threads = 0;
    app.add_option("--threads", threads, "OpenMP threads (overrides FPP_THREADS)");

    // sample-field
    auto* sf = app.add_subcommand("sample-field", "Sample a field and write it in FPBW format");
    std::string sf_kind = "brw";
    int sf_n = 4;
    int sf_cells = 1;
    std::uint64_t sf_seed = 0;
    std::string sf_out;
    std::int64_t sf_ox = 0;
    std::int64_t sf_oy = 0;
    sf->add_option("--kind", sf_kind, "brw | concat-brw | chi | tilde-chi");
    sf->add_option("--n", sf_n, "level n, side 2^n");
    sf->add_option("--gamma-cells", sf_cells, "odd number of cells");
    sf->add_option("--seed", sf_seed);
    sf->add_option("--out", sf_out, "output file")->required();
    sf->add_option("--origin-x", sf_ox);
    sf->add_option("--origin-y", sf_oy);

    // fpp
    auto* fp = app.add_subcommand("fpp", "Minimum crossing weight of a stored field");
    std::string fp_field;
    double fp_gamma = 1.0;
    std::string fp_dir = "lr";
    bool fp_json = false;
    bool fp_path = false;
    std::optional<std::uint64_t> fp_seed;
    fp->add_option("--field", fp_field, "FPBW file")->required();
    fp->add_option("--gamma", fp_gamma);
    fp->add_option("--dir", fp_dir, "lr | td")->check(CLI::IsMember({"lr", "td"}));
    fp->add_flag("--json", fp_json, "JSON output");
    fp->add_flag("--path", fp_path, "include the geodesic in the JSON output");
    fp->add_option("--seed", fp_seed, "seed recorded in the output");

    // exponent
    auto* ex = app.add_subcommand("exponent", "Crossing-weight scaling experiment");
    ExperimentConfig cfg;
    std::string ex_n = "4..8";
    std::string ex_kind = "brw";
    std::string ex_csv;
    std::string ex_json;
    ex->add_option("--gamma", cfg.gamma);
    ex->add_option("--n", ex_n, "level range a..b");
    ex->add_option("--reps", cfg.replicates);
    ex->add_option("--seed", cfg.seed);
    ex->add_option("--kind", ex_kind);
    ex->add_option("--gamma-cells", cfg.gamma_cells);
    ex->add_option("--bootstrap", cfg.bootstrap);
    ex->add_option("--csv", ex_csv, "CSV output file (stdout if omitted)");
    ex->add_option("--json", ex_json, "JSON fit report file");

    // rtv
    auto* rt = app.add_subcommand("rtv", "Regularized total variation of Brownian paths");
    std::string rt_lambda = "0.1";
    std::size_t rt_grid = 100000;
    std::size_t rt_reps = 100;
    std::uint64_t rt_seed = 0;
    std::string rt_csv;
    rt->add_option("--lambda", rt_lambda, "penalty or comma-separated penalties");
    rt->add_option("--grid", rt_grid, "grid steps m");
    rt->add_option("--reps", rt_reps);
    rt->add_option("--seed", rt_seed);
    rt->add_option("--csv", rt_csv, "CSV output file (stdout if omitted or empty)")->expected(0, 1);

    // construct
    auto* co = app.add_subcommand("construct", "Inductive light-crossing construction");
    ConstructParams params;
    int co_n = 4;
    std::uint64_t co_seed = 0;
    bool co_json = false;
    bool co_paper = false;
    bool co_path = false;
    co->add_option("--n", co_n);
    co->add_option("--gamma", params.gamma);
    co->add_option("--gamma-cells", params.gamma_cells);
    auto* co_delta = co->add_option("--delta-exp", params.delta_exp, "delta = 2^-d");
    auto* co_cut = co->add_option("--cutoff", params.case2_cutoff, "case-2 level cutoff");
    co->add_option("--seed", co_seed);
    co->add_option("--penalty-factor", params.penalty_factor, "RTV penalty per unit mass");
    co->add_flag("--json", co_json);
    co->add_flag("--path", co_path, "include the top-level crossing in the JSON output");
    co->add_flag("--check-geodesic", params.check_geodesic);
    co->add_flag("--paper-defaults", co_paper, "delta = 2^-100, cutoff = 60 (inert at desk scale)");

    // check-cov
    auto* cc = app.add_subcommand("check-cov", "Exact covariance checks");
    int cc_n = 4;
    int cc_cells = 3;
    std::size_t cc_pairs = 10000;
    std::uint64_t cc_seed = 0;
    cc->add_option("--n", cc_n);
    cc->add_option("--gamma-cells", cc_cells);
    cc->add_option("--pairs", cc_pairs);
    cc->add_option("--seed", cc_seed);

    // check-toy
    auto* ct = app.add_subcommand("check-toy", "Monte Carlo E min(X, Y)");
    std::size_t ct_reps = 1000000;
    std::uint64_t ct_seed = 0;
    ct->add_option("--reps", ct_reps);
    ct->add_option("--seed", ct_seed);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return 2;
    }

    try {
        if (const char* env = std::getenv("FPP_THREADS")) set_thread_count(std::atoi(env));
        if (threads > 0) set_thread_count(threads);

        if (*sf) {
            const FieldSpec spec{parse_field_kind(sf_kind), sf_n, sf_cells, {sf_ox, sf_oy}};
            spec.validate();
            write_field_file(sf_out, sample_field(spec, GaussianSource{sf_seed}));
            return 0;
        }
        if (*fp) {
            const FieldSample field = read_field_file(fp_field);
            const WeightGrid grid = make_weight_grid(field, fp_gamma);
            const CrossingResult res = crossing_distance(
                grid, grid.region, fp_dir == "lr" ? Direction::LeftRight : Direction::TopDown);
            if (fp_json) {
                Json j;
                j["weight"] = res.weight;
                j["path_length"] = res.path.size();
                j["n"] = field.spec.n;
                j["seed"] = fp_seed ? Json(*fp_seed) : Json(nullptr);
                if (fp_path) j["path"] = path_json(res.path);
                out << j.dump(2) << '\n';
            } else {
                out << "weight " << fmt(res.weight) << "\npath_length " << res.path.size() << '\n';
            }
            return 0;
        }
        if (*ex) {
            const auto [a, b] = parse_range(ex_n);
            cfg.n_min = a;
            cfg.n_max = b;
            cfg.kind = parse_field_kind(ex_kind);
            const ExponentFit fit = run_exponent(cfg);
            std::ostringstream csv;
            write_exponent_csv(csv, fit);
            emit(ex_csv, csv.str(), out);
            if (!ex_json.empty()) emit(ex_json, exponent_json(fit, cfg) + "\n", out);
            return 0;
        }
        if (*rt) {
            const std::vector<double> lambdas = parse_list(rt_lambda);
            const std::vector<RtvScalingRow> rows = rtv_scaling(lambdas, rt_grid, rt_reps, rt_seed);
            std::ostringstream csv;
            csv << "lambda,mean_phi,stderr,mean_k\n";
            for (const RtvScalingRow& r : rows)
                csv << fmt(r.lambda) << ',' << fmt(r.mean_phi) << ',' << fmt(r.stderr_phi) << ','
                    << fmt(r.mean_k) << '\n';
            emit(rt_csv, csv.str(), out);
            return 0;
        }
        if (*co) {
            if (co_paper) {
                const ConstructParams paper = ConstructParams::paper_defaults();
                if (co_delta->count() == 0) params.delta_exp = paper.delta_exp;
                if (co_cut->count() == 0) params.case2_cutoff = paper.case2_cutoff;
            }
            const InductionResult res = run_induction(co_n, co_seed, params);
            if (co_json) {
                Json j;
                j["n"] = co_n;
                j["gamma"] = params.gamma;
                j["gamma_cells"] = params.gamma_cells;
                j["delta_exp"] = params.delta_exp;
                j["cutoff"] = params.case2_cutoff;
                j["seed"] = co_seed;
                Json levels = Json::array();
                for (const LevelReport& l : res.levels) {
                    Json cases;
                    for (CaseKind k : {CaseKind::Base, CaseKind::Case1, CaseKind::Case2, CaseKind::Case3})
                        cases[to_string(k)] = l.case_counts[static_cast<std::size_t>(k)];
                    levels.push_back({{"level", l.level},
                                      {"case", to_string(l.lineage_case)},
                                      {"d_total", l.lineage_d_total},
                                      {"mean_d_total", l.d_total},
                                      {"ratio", l.ratio},
                                      {"switches", l.lineage_switches},
                                      {"valid", l.valid()},
                                      {"nodes", l.nodes},
                                      {"cases", cases},
                                      {"gadgets_built", l.gadgets_built},
                                      {"gadgets_fallback", l.gadgets_fallback},
                                      {"mean_err1", l.mean_err1},
                                      {"mean_err2", l.mean_err2},
                                      {"mean_m_dis", l.mean_m_dis}});
                }
                j["levels"] = std::move(levels);
                if (co_path) j["path"] = path_json(res.top.path);
                out << j.dump(2) << '\n';
            } else {
                out << "level,case,d_total,ratio,switches,valid\n";
                for (const LevelReport& l : res.levels)
                    out << l.level << ',' << to_string(l.lineage_case) << ',' << fmt(l.lineage_d_total)
                        << ',' << fmt(l.ratio) << ',' << l.lineage_switches << ','
                        << (l.valid() ? "true" : "false") << '\n';
            }
            return 0;
        }
        if (*cc) {
            const Lemma1Report rep = check_lemma1(cc_n, cc_cells, cc_pairs, cc_seed);
            Json j;
            j["n"] = rep.n;
            j["gamma_cells"] = rep.gamma_cells;
            j["pairs"] = rep.pairs;
            j["max_deviation"] = rep.max_deviation;
            j["pass"] = rep.max_deviation < 1e-9;
            out << j.dump(2) << '\n';
            return rep.max_deviation < 1e-9 ? 0 : 1;
        }
        if (*ct) {
            const ToyEstimate est = check_min_toy(ct_reps, ct_seed);
            const double target = -1.0 / std::sqrt(M_PI);
            Json j;
            j["reps"] = ct_reps;
            j["seed"] = ct_seed;
            j["mean"] = est.mean;
            j["stderr"] = est.std_error;
            j["target"] = target;
            j["deviation"] = est.mean - target;
            out << j.dump(2) << '\n';
            return 0;
        }
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}

}  // namespace fpp
