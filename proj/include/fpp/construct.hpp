#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fpp/coarsen.hpp"
#include "fpp/field.hpp"
#include "fpp/gaussian.hpp"
#include "fpp/geodesic.hpp"
#include "fpp/lattice.hpp"

namespace fpp {

enum class CaseKind { Base, Case1, Case2, Case3 };

const char* to_string(CaseKind kind);

struct ConstructParams {
    double gamma = 0.5;
    int gamma_cells = 3;
    int delta_exp = 2;  // delta = 2^-delta_exp
    int case2_cutoff = 2;
    double mass_exp_hi = 2.0 / 3.0;
    double mass_exp_lo = 0.1;
    std::optional<double> penalty_factor;  // defaults to (1 + 20 delta) / Gamma
    bool check_geodesic = false;           // compare every node with its exact geodesic

    static ConstructParams paper_defaults();

    double delta() const;
    double penalty() const;
    // Box side max(delta 2^level, 1) used for the last-hit bookkeeping.
    std::int64_t l100(int level) const;
    void validate() const;
};

// A constructed left-right crossing of V_L^{Gamma,u}, L = 2^level.
struct CrossingLevel {
    int level = 0;
    Point origin;
    int gamma_cells = 1;
    LatticePath path;
    double d_total = 0.0;
    std::vector<double> d_cells;
    CoarsePath coarse;              // scale L/2 (the path itself at level 0)
    std::vector<Center> last_hits;  // per cell j, at scale l100(level)

    std::int64_t side() const { return std::int64_t{1} << level; }
    Rect rect() const { return {origin.x, origin.y, gamma_cells * side(), side()}; }
};

// Row choices for the 2 Gamma columns of side L inside V_{2L}^Gamma; rows are
// 1 (top) and 2 (bottom).
struct SwitchPlan {
    CaseKind kind = CaseKind::Case1;
    std::array<int, 2> half_rows{1, 1};
    std::array<std::array<double, 2>, 2> case1_sums{};  // [k][i], Case 1/2 selection
    std::vector<int> column_rows;
    std::vector<int> switch_columns;  // row changes between column c and c + 1
    std::size_t switches = 0;
};

struct LevelDiagnostics {
    double err1 = 0.0;
    double err2 = 0.0;
    double m_dis = 0.0;
    std::size_t gadgets_built = 0;
    std::size_t gadgets_fallback = 0;
};

struct ValidationFlags {
    bool crossing = false;
    bool coarse_simple = false;
    bool weights_consistent = false;
    bool last_hits_adjacent = false;
    bool ok() const { return crossing && coarse_simple && weights_consistent && last_hits_adjacent; }
};

struct ExtendResult {
    CrossingLevel crossing;
    FieldSample field;
    SwitchPlan plan;
    LevelDiagnostics diagnostics;
    bool hyp4 = false;
    ValidationFlags flags;
};

// The four level-l inputs, indexed [i - 1][k - 1]: row i = 1 on top, half k = 1 on the left.
struct Quad {
    std::array<std::array<CrossingLevel, 2>, 2> crossing;
    std::array<std::array<FieldSample, 2>, 2> field;

    const CrossingLevel& at(int i, int k) const { return crossing[i - 1][k - 1]; }
};

// Origin of the child V_L^{Gamma} in row i, half k of V_{2L}^{Gamma,u}.
Point child_origin(Point u, int level, int gamma_cells, int i, int k);

CrossingLevel base_crossing(int gamma_cells, Point u);

CaseKind classify_case(std::span<const double> d_cells, double d_total, int level,
                       const ConstructParams& params);

// Field chi^{2L,u} assembled from the four child fields and the level-(l+1) increments.
FieldSample assemble_parent_field(const Quad& quad, const GaussianSource& source);

struct LevelStats {
    double d_total = 0.0;
    std::vector<double> d_cells;
};

// Weights of the crossing under `field` (which must cover the crossing's rectangle).
LevelStats level_stats(const CrossingLevel& crossing, const FieldSample& field, double gamma);

// Cell masses used for case selection: the average over the four children.
std::vector<double> decision_masses(const Quad& quad);

ExtendResult case1_extend(const Quad& quad, const GaussianSource& source,
                          const ConstructParams& params, CaseKind label = CaseKind::Case1);
ExtendResult case3_extend(const Quad& quad, const GaussianSource& source,
                          const ConstructParams& params);
ExtendResult extend(const Quad& quad, const GaussianSource& source, const ConstructParams& params);

ValidationFlags validate_crossing(const CrossingLevel& crossing, const FieldSample& field,
                                  const ConstructParams& params);

// Last-hit box agreement of the parent with the child holding its last point
// left of each interior line x = u_x + 2 j L - 1, j in [Gamma].
bool hyp4_holds(const CrossingLevel& parent, const Quad& quad, const ConstructParams& params);

struct LevelReport {
    int level = 0;
    std::size_t nodes = 0;
    CaseKind lineage_case = CaseKind::Base;
    std::array<std::size_t, 4> case_counts{};
    double d_total = 0.0;  // mean over the nodes of this level
    double lineage_d_total = 0.0;
    double ratio = 0.0;  // d_total / previous level's d_total
    std::size_t lineage_switches = 0;
    std::size_t total_switches = 0;
    std::size_t invalid_nodes = 0;
    std::size_t hyp4_failures = 0;
    std::size_t geodesic_violations = 0;
    std::size_t gadgets_built = 0;
    std::size_t gadgets_fallback = 0;
    double mean_err1 = 0.0;
    double mean_err2 = 0.0;
    double mean_m_dis = 0.0;
    bool valid() const { return invalid_nodes == 0 && hyp4_failures == 0 && geodesic_violations == 0; }
};

struct InductionResult {
    std::vector<LevelReport> levels;  // index = level, 0..n
    CrossingLevel top;
    FieldSample top_field;
    SwitchPlan top_plan;
    LevelDiagnostics top_diagnostics;
};

inline constexpr int kMaxInductionLevel = 12;

// Builds crossings of every V_{2^l}^{Gamma,u} in the dyadic tiling of V_{2^n}^{Gamma}
// bottom-up from straight lines, with all randomness drawn from `seed`.
InductionResult run_induction(int n, std::uint64_t seed, const ConstructParams& params);

}  // namespace fpp
