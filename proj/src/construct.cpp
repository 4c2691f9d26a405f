#include "fpp/construct.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

#include "fpp/rtv.hpp"

namespace fpp {

const char* to_string(CaseKind kind) {
    switch (kind) {
        case CaseKind::Base: return "base";
        case CaseKind::Case1: return "case1";
        case CaseKind::Case2: return "case2";
        case CaseKind::Case3: return "case3";
    }
    return "?";
}

ConstructParams ConstructParams::paper_defaults() {
    ConstructParams p;
    p.delta_exp = 100;
    p.case2_cutoff = 60;
    return p;
}

double ConstructParams::delta() const { return std::ldexp(1.0, -delta_exp); }

double ConstructParams::penalty() const {
    return penalty_factor ? *penalty_factor : (1.0 + 20.0 * delta()) / gamma_cells;
}

std::int64_t ConstructParams::l100(int level) const {
    return level > delta_exp ? std::int64_t{1} << (level - delta_exp) : 1;
}

void ConstructParams::validate() const {
    if (!(gamma >= 0.0)) throw std::invalid_argument("gamma must be nonnegative");
    if (gamma_cells < 3 || gamma_cells % 2 == 0)
        throw std::invalid_argument("Gamma must be odd and at least 3");
    if (delta_exp < 1) throw std::invalid_argument("delta exponent must be at least 1");
    if (case2_cutoff < 0) throw std::invalid_argument("case-2 cutoff must be nonnegative");
    if (penalty_factor && !(*penalty_factor > 0.0))
        throw std::invalid_argument("penalty factor must be positive");
}

Point child_origin(Point u, int level, int gamma_cells, int i, int k) {
    const std::int64_t side = std::int64_t{1} << level;
    return {u.x + (k - 1) * gamma_cells * side, u.y + (i == 1 ? side : 0)};
}

namespace {

struct PointHash {
    std::size_t operator()(Point p) const {
        return static_cast<std::size_t>(
            hash_combine(static_cast<std::uint64_t>(p.x), static_cast<std::uint64_t>(p.y)));
    }
};

using IndexMap = std::unordered_map<Point, std::size_t, PointHash>;

IndexMap first_index(const LatticePath& path) {
    IndexMap m;
    for (std::size_t i = 0; i < path.size(); ++i) m.emplace(path[i], i);
    return m;
}

// Column c (1-based) of side-L boxes in row i of V_{2L}^{Gamma,u}.
Rect column_box(Point u, std::int64_t side, int i, int c) {
    return {u.x + (c - 1) * side, u.y + (i == 1 ? side : 0), side, side};
}

std::vector<Point> points_in(const LatticePath& path, const Rect& box) {
    std::vector<Point> out;
    for (Point p : path)
        if (box.contains(p)) out.push_back(p);
    return out;
}

std::size_t index_of(const LatticePath& path, Point p) {
    const auto it = std::find(path.begin(), path.end(), p);
    if (it == path.end()) throw std::logic_error("point is not on the path");
    return static_cast<std::size_t>(it - path.begin());
}

// Appends path[from..to] in forward order, skipping a repeated joint point.
void append(LatticePath& out, const LatticePath& path, std::size_t from, std::size_t to) {
    for (std::size_t i = from; i <= to && i < path.size(); ++i)
        if (out.empty() || out.back() != path[i]) out.push_back(path[i]);
}

void append(LatticePath& out, const LatticePath& piece) {
    if (!piece.empty()) append(out, piece, 0, piece.size() - 1);
}

// Last index whose point lies in the columns x <= x_line.
std::size_t last_left_of(const LatticePath& path, std::int64_t x_line) {
    for (std::size_t i = path.size(); i-- > 0;)
        if (path[i].x <= x_line) return i;
    throw std::logic_error("path never reaches the line");
}

std::int64_t floor_to(std::int64_t v, std::int64_t side) {
    std::int64_t q = v / side;
    if (v % side != 0 && v < 0) --q;
    return q * side;
}

Rect box_of(Point p, std::int64_t side) { return {floor_to(p.x, side), floor_to(p.y, side), side, side}; }

struct Geometry {
    Point u;
    int level = 0;  // child level
    std::int64_t side = 1;
    int gamma_cells = 1;
    Rect parent;
};

Geometry geometry_of(const Quad& quad) {
    Geometry g;
    g.level = quad.at(2, 1).level;
    g.u = quad.at(2, 1).origin;
    g.side = std::int64_t{1} << g.level;
    g.gamma_cells = quad.at(2, 1).gamma_cells;
    g.parent = {g.u.x, g.u.y, 2 * g.gamma_cells * g.side, 2 * g.side};
    return g;
}

// Minimum-weight link from path a (row ia, left half) to path b (row ib,
// right half) through the two middle columns, never re-entering a box.
LatticePath link_halves(const WeightGrid& grid, const Geometry& g, const LatticePath& a, int ia,
                        const LatticePath& b, int ib) {
    const int mid = g.gamma_cells;
    const std::vector<Point> sources = points_in(a, column_box(g.u, g.side, ia, mid));
    const std::vector<Point> targets = points_in(b, column_box(g.u, g.side, ib, mid + 1));
    CrossingResult best;
    if (ia == ib) {
        const std::array<Rect, 2> chain{column_box(g.u, g.side, ia, mid),
                                        column_box(g.u, g.side, ia, mid + 1)};
        best = box_chain_path(grid, chain, sources, targets);
    } else {
        const std::array<Rect, 3> across{column_box(g.u, g.side, ia, mid),
                                         column_box(g.u, g.side, ia, mid + 1),
                                         column_box(g.u, g.side, ib, mid + 1)};
        const std::array<Rect, 3> down{column_box(g.u, g.side, ia, mid),
                                       column_box(g.u, g.side, ib, mid),
                                       column_box(g.u, g.side, ib, mid + 1)};
        best = box_chain_path(grid, across, sources, targets);
        CrossingResult other = box_chain_path(grid, down, sources, targets);
        if (other.weight < best.weight) best = std::move(other);
    }
    LatticePath walk;
    append(walk, a, 0, index_of(a, best.path.front()));
    append(walk, best.path);
    append(walk, b, index_of(b, best.path.back()), b.size() - 1);
    return loop_erase(walk);
}

// Ring walk from index `from` to index `to`, the shorter way round.
LatticePath ring_arc(const LatticePath& ring, std::size_t from, std::size_t to) {
    const std::size_t n = ring.size();
    const std::size_t forward = (to + n - from) % n;
    LatticePath out;
    if (forward <= n - forward) {
        for (std::size_t s = 0; s <= forward; ++s) out.push_back(ring[(from + s) % n]);
    } else {
        for (std::size_t s = 0; s <= n - forward; ++s) out.push_back(ring[(from + n - s) % n]);
    }
    return out;
}

struct Transfer {
    std::size_t leave = 0;  // last index used on the outgoing row crossing
    LatticePath piece;      // starts next to path_a[leave], ends at path_b[join]
    std::size_t join = 0;   // first index used on the incoming row crossing
};

// Minimum-weight connector switching from row a to row b right of the line x_line.
Transfer fallback_transfer(const WeightGrid& grid, const Geometry& g, const LatticePath& pa, int a,
                           const LatticePath& pb, int b, int column, std::size_t start) {
    const std::int64_t x_line = g.u.x + column * g.side - 1;
    Transfer t;
    t.leave = last_left_of(pa, x_line);
    if (t.leave < start || t.leave + 1 >= pa.size())
        throw std::logic_error("row crossing is not box-monotone");
    const std::array<Rect, 2> chain{column_box(g.u, g.side, a, column + 1),
                                    column_box(g.u, g.side, b, column + 1)};
    const std::array<Point, 1> source{pa[t.leave + 1]};
    const std::vector<Point> targets = points_in(pb, chain[1]);
    t.piece = box_chain_path(grid, chain, source, targets).path;
    t.join = index_of(pb, t.piece.back());
    return t;
}

// Switching gadget: contours around the last-hit boxes of both rows at the
// line, joined by a vertical crossing of the strip between them.
std::optional<Transfer> gadget_transfer(const WeightGrid& grid, const Geometry& g,
                                        const LatticePath& pa, int a, const LatticePath& pb,
                                        int column, std::size_t start, std::int64_t box) {
    const std::int64_t x_line = g.u.x + column * g.side - 1;
    const std::size_t qa = last_left_of(pa, x_line);
    const std::size_t qb = last_left_of(pb, x_line);
    if (qa < start) return std::nullopt;
    const Rect box_a = box_of(pa[qa], box);
    const Rect box_b = box_of(pb[qb], box);
    auto around = [&](const Rect& r) {
        return intersect(Rect{r.x0 - box / 2, r.y0 - box / 2, 2 * box, 2 * box}, g.parent);
    };
    LatticePath ca;
    LatticePath cb;
    LatticePath strip;
    try {
        ca = annulus_contour(grid, box_a, around(box_a)).path;
        cb = annulus_contour(grid, box_b, around(box_b)).path;
        const std::int64_t lo = std::min(box_a.y0, box_b.y0);
        const std::int64_t hi = std::max(box_a.y1(), box_b.y1());
        strip = crossing_distance(grid, Rect{x_line - box + 1, lo, box, hi - lo + 1},
                                  Direction::TopDown)
                    .path;
    } catch (const std::exception&) {
        return std::nullopt;
    }
    if (a == 2) std::reverse(strip.begin(), strip.end());
    const IndexMap ring_a = first_index(ca);
    const IndexMap ring_b = first_index(cb);

    std::optional<std::size_t> leave;
    for (std::size_t i = start; i <= qa; ++i)
        if (ring_a.count(pa[i])) {
            leave = i;
            break;
        }
    std::optional<std::size_t> sa;
    for (std::size_t i = 0; i < strip.size(); ++i)
        if (ring_a.count(strip[i])) sa = i;
    if (!leave || !sa) return std::nullopt;
    std::optional<std::size_t> sb;
    for (std::size_t i = *sa; i < strip.size(); ++i)
        if (ring_b.count(strip[i])) {
            sb = i;
            break;
        }
    std::optional<std::size_t> join;
    for (std::size_t i = 0; i < qb; ++i)
        if (ring_b.count(pb[i])) join = i;
    if (!sb || !join) return std::nullopt;

    Transfer t;
    t.leave = *leave;
    t.join = *join;
    append(t.piece, ring_arc(ca, ring_a.at(pa[t.leave]), ring_a.at(strip[*sa])));
    append(t.piece, strip, *sa, *sb);
    append(t.piece, ring_arc(cb, ring_b.at(strip[*sb]), ring_b.at(pb[t.join])));
    return t;
}

// Last-hit boxes at scale `box` of `path` at the lines x = u_x + j side - 1.
std::vector<Center> last_hits_of(const LatticePath& path, Point u, std::int64_t side, int cells,
                                 std::int64_t box) {
    const CoarsePath coarse = l_coarsening(path, box);
    std::vector<Center> out;
    for (int j = 1; j <= cells; ++j) out.push_back(last_hit_left_of(coarse, u.x + j * side - 1));
    return out;
}

CrossingLevel finish_crossing(LatticePath path, const Geometry& g, const FieldSample& field,
                              const ConstructParams& params) {
    CrossingLevel c;
    c.level = g.level + 1;
    c.origin = g.u;
    c.gamma_cells = g.gamma_cells;
    c.path = std::move(path);
    const LevelStats s = level_stats(c, field, params.gamma);
    c.d_total = s.d_total;
    c.d_cells = s.d_cells;
    c.coarse = l_coarsening(c.path, g.side);
    c.last_hits = last_hits_of(c.path, g.u, 2 * g.side, g.gamma_cells, params.l100(c.level));
    return c;
}

bool parent_shape_ok(const LatticePath& path, const Geometry& g) {
    return !path.empty() && is_lattice_path(path) && is_self_avoiding(path) &&
           path.front().x == g.parent.x0 && path.back().x == g.parent.x1() &&
           std::all_of(path.begin(), path.end(), [&](Point p) { return g.parent.contains(p); }) &&
           is_simple(l_coarsening(path, g.side));
}

bool hyp4_path(const LatticePath& path, const Quad& quad, const Geometry& g,
               const ConstructParams& params) {
    const std::int64_t box = params.l100(g.level + 1);
    const CoarsePath parent_coarse = l_coarsening(path, box);
    std::array<std::array<std::optional<CoarsePath>, 2>, 2> child_coarse;
    for (int j = 1; j <= g.gamma_cells; ++j) {
        const std::int64_t x_line = g.u.x + 2 * j * g.side - 1;
        const Point p = path[last_left_of(path, x_line)];
        const int i = p.y >= g.u.y + g.side ? 1 : 2;
        const int k = p.x >= g.u.x + g.gamma_cells * g.side ? 2 : 1;
        auto& cc = child_coarse[i - 1][k - 1];
        if (!cc) cc = l_coarsening(quad.at(i, k).path, box);
        try {
            if (last_hit_left_of(parent_coarse, x_line) != last_hit_left_of(*cc, x_line)) return false;
        } catch (const std::invalid_argument&) {
            return false;
        }
    }
    return true;
}

double cell_mass_threshold(double d_total, int cells, double exponent) {
    return std::pow(static_cast<double>(cells), -exponent) * d_total;
}

void fill_diagnostics(ExtendResult& r, const Quad& quad, const Geometry& g,
                      const GaussianSource& source, const ConstructParams& params) {
    const std::vector<double> d = decision_masses(quad);
    const double a2 = 1.0 - std::ldexp(1.0, -2 * (g.level + 1));
    const double gm = params.gamma;
    for (int k = 1; k <= 2; ++k)
        for (int j = 1; j <= g.gamma_cells; ++j) {
            const int row = r.plan.column_rows[(k - 1) * g.gamma_cells + j - 1];
            const double z = switch_term(g.gamma_cells, g.u, g.level, row, k, j).value(source);
            const double dj = d[j - 1];
            r.diagnostics.err1 += 0.5 * gm * gm * dj * (z * z - a2);
            r.diagnostics.err2 += dj * (std::exp(gm * z) - 1.0 - gm * z - 0.5 * gm * gm * z * z);
        }
}

ExtendResult finish_extend(LatticePath path, const Quad& quad, const Geometry& g,
                           FieldSample field, const ConstructParams& params) {
    ExtendResult r;
    r.crossing = finish_crossing(std::move(path), g, field, params);
    r.field = std::move(field);
    r.flags = validate_crossing(r.crossing, r.field, params);
    r.hyp4 = r.flags.crossing && hyp4_path(r.crossing.path, quad, g, params);
    return r;
}

}  // namespace

CrossingLevel base_crossing(int gamma_cells, Point u) {
    if (gamma_cells < 1) throw std::invalid_argument("Gamma must be positive");
    CrossingLevel c;
    c.level = 0;
    c.origin = u;
    c.gamma_cells = gamma_cells;
    for (int t = 0; t < gamma_cells; ++t) c.path.push_back({u.x + t, u.y});
    c.d_total = gamma_cells;
    c.d_cells.assign(static_cast<std::size_t>(gamma_cells), 1.0);
    c.coarse = l_coarsening(c.path, 1);
    c.last_hits = last_hits_of(c.path, u, 1, gamma_cells, 1);
    return c;
}

CaseKind classify_case(std::span<const double> d_cells, double d_total, int level,
                       const ConstructParams& params) {
    if (level < params.case2_cutoff) return CaseKind::Case2;
    const int cells = static_cast<int>(d_cells.size());
    const double heavy = cell_mass_threshold(d_total, cells, params.mass_exp_hi);
    double mass = 0.0;
    for (double d : d_cells)
        if (d >= heavy) mass += d;
    return mass >= cell_mass_threshold(d_total, cells, params.mass_exp_lo) ? CaseKind::Case1
                                                                           : CaseKind::Case3;
}

FieldSample assemble_parent_field(const Quad& quad, const GaussianSource& source) {
    const Geometry g = geometry_of(quad);
    FieldSample out;
    out.spec = {FieldKind::Chi, g.level + 1, g.gamma_cells, g.u};
    out.values.assign(static_cast<std::size_t>(g.parent.area()), 0.0);
    for (int i = 1; i <= 2; ++i)
        for (int k = 1; k <= 2; ++k) {
            const FieldSample& child = quad.field[i - 1][k - 1];
            const Rect cr = child.spec.rect();
            std::vector<double> z(static_cast<std::size_t>(g.gamma_cells));
            for (int j = 1; j <= g.gamma_cells; ++j)
                z[j - 1] = switch_term(g.gamma_cells, g.u, g.level, i, k, j).value(source);
            for (std::int64_t y = cr.y0; y <= cr.y1(); ++y)
                for (std::int64_t x = cr.x0; x <= cr.x1(); ++x) {
                    const Point p{x, y};
                    const auto j = static_cast<std::size_t>((x - cr.x0) / g.side);
                    out.values[static_cast<std::size_t>((y - g.u.y) * g.parent.width + (x - g.u.x))] =
                        child.at(p) + z[j];
                }
        }
    return out;
}

LevelStats level_stats(const CrossingLevel& crossing, const FieldSample& field, double gamma) {
    if (!field.spec.rect().contains(crossing.rect()))
        throw std::invalid_argument("field does not cover the crossing");
    if (field.spec.n != crossing.level) throw std::invalid_argument("field and crossing levels differ");
    LevelStats s;
    s.d_cells.assign(static_cast<std::size_t>(crossing.gamma_cells), 0.0);
    const std::int64_t side = crossing.side();
    for (Point p : crossing.path) {
        const auto j = static_cast<std::size_t>((p.x - crossing.origin.x) / side);
        s.d_cells[j] += std::exp(gamma * field.at(p));
    }
    s.d_total = std::accumulate(s.d_cells.begin(), s.d_cells.end(), 0.0);
    return s;
}

std::vector<double> decision_masses(const Quad& quad) {
    std::vector<double> d(quad.at(1, 1).d_cells.size(), 0.0);
    for (const auto& row : quad.crossing)
        for (const CrossingLevel& c : row)
            for (std::size_t j = 0; j < d.size(); ++j) d[j] += 0.25 * c.d_cells[j];
    return d;
}

ExtendResult case1_extend(const Quad& quad, const GaussianSource& source,
                          const ConstructParams& params, CaseKind label) {
    const Geometry g = geometry_of(quad);
    const std::vector<double> d = decision_masses(quad);
    SwitchPlan plan;
    plan.kind = label;
    for (int k = 1; k <= 2; ++k) {
        for (int i = 1; i <= 2; ++i) {
            double sum = 0.0;
            for (int j = 1; j <= g.gamma_cells; ++j)
                sum += d[j - 1] * switch_term(g.gamma_cells, g.u, g.level, i, k, j).value(source);
            plan.case1_sums[k - 1][i - 1] = sum;
        }
        plan.half_rows[k - 1] = plan.case1_sums[k - 1][1] < plan.case1_sums[k - 1][0] ? 2 : 1;
    }
    plan.column_rows.assign(static_cast<std::size_t>(2 * g.gamma_cells), plan.half_rows[0]);
    std::fill(plan.column_rows.begin() + g.gamma_cells, plan.column_rows.end(), plan.half_rows[1]);
    if (plan.half_rows[0] != plan.half_rows[1]) {
        plan.switch_columns.push_back(g.gamma_cells);
        plan.switches = 1;
    }

    FieldSample field = assemble_parent_field(quad, source);
    const WeightGrid grid = make_weight_grid(field, params.gamma, Exec::Serial);
    LatticePath path = link_halves(grid, g, quad.at(plan.half_rows[0], 1).path, plan.half_rows[0],
                                   quad.at(plan.half_rows[1], 2).path, plan.half_rows[1]);
    ExtendResult r = finish_extend(std::move(path), quad, g, std::move(field), params);
    r.plan = std::move(plan);
    fill_diagnostics(r, quad, g, source, params);
    return r;
}

ExtendResult case3_extend(const Quad& quad, const GaussianSource& source,
                          const ConstructParams& params) {
    const Geometry g = geometry_of(quad);
    const int cells = g.gamma_cells;
    const std::vector<double> d = decision_masses(quad);
    const double d_total = std::accumulate(d.begin(), d.end(), 0.0);
    const double light = cell_mass_threshold(d_total, cells, params.mass_exp_hi);

    std::vector<int> light_columns;
    std::vector<double> s_path{0.0};
    double m_dis = 0.0;
    const double c_next = level_coeffs(g.level + 1).c;
    for (int k = 1; k <= 2; ++k)
        for (int j = 1; j <= cells; ++j) {
            if (d[j - 1] > light) continue;
            const DyadicKey key = switch_term(cells, g.u, g.level, 2, k, j).box_key;
            const double inc = c_next * params.gamma * d[j - 1] * source(key);
            light_columns.push_back((k - 1) * cells + j);
            s_path.push_back(s_path.back() + inc);
            m_dis = std::max(m_dis, std::abs(inc));
        }
    if (light_columns.empty()) return case1_extend(quad, source, params, CaseKind::Case3);

    const RtvPartition part = rtv_dp(s_path, params.penalty() * d_total);
    const std::vector<int> signs = rtv_signs(s_path, part);

    SwitchPlan plan;
    plan.kind = CaseKind::Case3;
    plan.column_rows.assign(static_cast<std::size_t>(2 * cells), signs.back() < 0 ? 1 : 2);
    {
        std::size_t next = 0;
        for (int c = 1; c <= 2 * cells; ++c) {
            while (next < light_columns.size() && light_columns[next] < c) ++next;
            if (next < light_columns.size()) plan.column_rows[c - 1] = signs[next] < 0 ? 1 : 2;
        }
    }
    for (int c = 1; c < 2 * cells; ++c)
        if (plan.column_rows[c - 1] != plan.column_rows[c]) plan.switch_columns.push_back(c);
    plan.switches = plan.switch_columns.size();
    plan.half_rows = {plan.column_rows.front(), plan.column_rows[cells]};

    FieldSample field = assemble_parent_field(quad, source);
    const WeightGrid grid = make_weight_grid(field, params.gamma, Exec::Serial);
    LevelDiagnostics diag;
    diag.m_dis = m_dis;

    LatticePath path;
    if (plan.switches == 0) {
        const int row = plan.column_rows.front();
        path = link_halves(grid, g, quad.at(row, 1).path, row, quad.at(row, 2).path, row);
    } else {
        const std::array<LatticePath, 2> rows{
            link_halves(grid, g, quad.at(1, 1).path, 1, quad.at(1, 2).path, 1),
            link_halves(grid, g, quad.at(2, 1).path, 2, quad.at(2, 2).path, 2)};
        const std::int64_t box = std::llround(params.delta() * static_cast<double>(g.side));
        const bool gadgets_possible = params.delta() * static_cast<double>(g.side) >= 2.0;
        std::vector<char> use_gadget(plan.switches, gadgets_possible ? 1 : 0);

        auto assemble = [&]() {
            LatticePath walk;
            std::size_t start = 0;
            for (std::size_t r = 0; r < plan.switches; ++r) {
                const int c = plan.switch_columns[r];
                const int a = plan.column_rows[c - 1];
                const int b = plan.column_rows[c];
                const LatticePath& pa = rows[a - 1];
                const LatticePath& pb = rows[b - 1];
                std::optional<Transfer> t;
                if (use_gadget[r]) t = gadget_transfer(grid, g, pa, a, pb, c, start, box);
                if (!t) {
                    use_gadget[r] = 0;
                    t = fallback_transfer(grid, g, pa, a, pb, b, c, start);
                    append(walk, pa, start, t->leave);
                } else {
                    append(walk, pa, start, t->leave);
                }
                append(walk, t->piece);
                start = t->join;
            }
            const LatticePath& last = rows[plan.column_rows.back() - 1];
            append(walk, last, start, last.size() - 1);
            return loop_erase(walk);
        };

        for (;;) {
            path = assemble();
            const bool ok = parent_shape_ok(path, g) && hyp4_path(path, quad, g, params);
            const auto next = std::find(use_gadget.begin(), use_gadget.end(), 1);
            if (ok || next == use_gadget.end()) break;
            *next = 0;
        }
        for (char used : use_gadget) (used ? diag.gadgets_built : diag.gadgets_fallback)++;
    }

    ExtendResult r = finish_extend(std::move(path), quad, g, std::move(field), params);
    r.plan = std::move(plan);
    r.diagnostics = diag;
    fill_diagnostics(r, quad, g, source, params);
    return r;
}

ExtendResult extend(const Quad& quad, const GaussianSource& source, const ConstructParams& params) {
    const std::vector<double> d = decision_masses(quad);
    const double d_total = std::accumulate(d.begin(), d.end(), 0.0);
    const CaseKind kind = classify_case(d, d_total, quad.at(2, 1).level, params);
    if (kind == CaseKind::Case3) return case3_extend(quad, source, params);
    return case1_extend(quad, source, params, kind);
}

ValidationFlags validate_crossing(const CrossingLevel& crossing, const FieldSample& field,
                                  const ConstructParams& params) {
    ValidationFlags f;
    const Rect r = crossing.rect();
    const LatticePath& path = crossing.path;
    f.crossing = !path.empty() && is_lattice_path(path) && is_self_avoiding(path) &&
                 path.front().x == r.x0 && path.back().x == r.x1() &&
                 std::all_of(path.begin(), path.end(), [&](Point p) { return r.contains(p); });
    if (!f.crossing) return f;
    if (crossing.level == 0) {
        f.coarse_simple = true;
    } else {
        const CoarsePath coarse = l_coarsening(path, crossing.side() / 2);
        f.coarse_simple = is_simple(coarse) && coarse.centers == crossing.coarse.centers;
    }
    const LevelStats s = level_stats(crossing, field, params.gamma);
    const double sum = std::accumulate(crossing.d_cells.begin(), crossing.d_cells.end(), 0.0);
    const double tol = 1e-9 * std::max(1.0, s.d_total);
    f.weights_consistent = crossing.d_cells.size() == s.d_cells.size() &&
                           std::abs(s.d_total - crossing.d_total) <= tol &&
                           std::abs(sum - crossing.d_total) <= tol;
    for (std::size_t j = 0; f.weights_consistent && j < s.d_cells.size(); ++j)
        f.weights_consistent = std::abs(s.d_cells[j] - crossing.d_cells[j]) <= tol;

    const std::int64_t box = params.l100(crossing.level);
    const double half = static_cast<double>(box) / 2.0;
    f.last_hits_adjacent = crossing.last_hits.size() == static_cast<std::size_t>(crossing.gamma_cells);
    for (int j = 1; f.last_hits_adjacent && j <= crossing.gamma_cells; ++j) {
        const Center c = crossing.last_hits[j - 1];
        const double line = static_cast<double>(r.x0 + j * crossing.side() - 1);
        f.last_hits_adjacent = c.x == line + 0.5 - half && c.y > static_cast<double>(r.y0) - 0.5 &&
                               c.y < static_cast<double>(r.y1()) + 0.5;
    }
    return f;
}

bool hyp4_holds(const CrossingLevel& parent, const Quad& quad, const ConstructParams& params) {
    return hyp4_path(parent.path, quad, geometry_of(quad), params);
}

namespace {

struct Node {
    CrossingLevel crossing;
    FieldSample field;
    SwitchPlan plan;
    LevelDiagnostics diagnostics;
};

struct Accumulator {
    std::vector<LevelReport> levels;
    std::vector<double> d_sum;
    std::vector<double> err1_sum;
    std::vector<double> err2_sum;
    std::vector<double> mdis_sum;
};

Node build(int level, Point u, const GaussianSource& source, const ConstructParams& params,
           Accumulator& acc) {
    LevelReport& rep = acc.levels[static_cast<std::size_t>(level)];
    const bool lineage = u.x == 0 && u.y == 0;
    Node node;
    if (level == 0) {
        node.crossing = base_crossing(params.gamma_cells, u);
        node.field.spec = {FieldKind::Chi, 0, params.gamma_cells, u};
        node.field.values.assign(static_cast<std::size_t>(params.gamma_cells), 0.0);
        if (!validate_crossing(node.crossing, node.field, params).ok()) ++rep.invalid_nodes;
        ++rep.case_counts[static_cast<std::size_t>(CaseKind::Base)];
    } else {
        Quad quad;
        for (int i = 1; i <= 2; ++i)
            for (int k = 1; k <= 2; ++k) {
                Node child = build(level - 1, child_origin(u, level - 1, params.gamma_cells, i, k),
                                   source, params, acc);
                quad.crossing[i - 1][k - 1] = std::move(child.crossing);
                quad.field[i - 1][k - 1] = std::move(child.field);
            }
        ExtendResult r = extend(quad, source, params);
        if (!r.flags.ok()) ++rep.invalid_nodes;
        if (!r.hyp4) ++rep.hyp4_failures;
        if (params.check_geodesic) {
            const WeightGrid grid = make_weight_grid(r.field, params.gamma, Exec::Serial);
            const double geo = crossing_distance(grid, r.crossing.rect(), Direction::LeftRight).weight;
            if (geo > r.crossing.d_total * (1.0 + 1e-12)) ++rep.geodesic_violations;
        }
        ++rep.case_counts[static_cast<std::size_t>(r.plan.kind)];
        rep.total_switches += r.plan.switches;
        rep.gadgets_built += r.diagnostics.gadgets_built;
        rep.gadgets_fallback += r.diagnostics.gadgets_fallback;
        acc.err1_sum[level] += r.diagnostics.err1;
        acc.err2_sum[level] += r.diagnostics.err2;
        acc.mdis_sum[level] += r.diagnostics.m_dis;
        if (lineage) {
            rep.lineage_case = r.plan.kind;
            rep.lineage_switches = r.plan.switches;
        }
        node.crossing = std::move(r.crossing);
        node.field = std::move(r.field);
        node.plan = std::move(r.plan);
        node.diagnostics = r.diagnostics;
    }
    ++rep.nodes;
    acc.d_sum[level] += node.crossing.d_total;
    if (lineage) rep.lineage_d_total = node.crossing.d_total;
    return node;
}

}  // namespace

InductionResult run_induction(int n, std::uint64_t seed, const ConstructParams& params) {
    if (n < 0 || n > kMaxInductionLevel) throw std::invalid_argument("induction depth must be in [0, 12]");
    params.validate();
    const auto levels = static_cast<std::size_t>(n + 1);
    Accumulator acc{std::vector<LevelReport>(levels), std::vector<double>(levels, 0.0),
                    std::vector<double>(levels, 0.0), std::vector<double>(levels, 0.0),
                    std::vector<double>(levels, 0.0)};
    Node top = build(n, Point{0, 0}, GaussianSource{seed}, params, acc);

    InductionResult out;
    for (std::size_t l = 0; l < levels; ++l) {
        LevelReport& rep = acc.levels[l];
        rep.level = static_cast<int>(l);
        const auto nodes = static_cast<double>(rep.nodes);
        rep.d_total = acc.d_sum[l] / nodes;
        rep.mean_err1 = acc.err1_sum[l] / nodes;
        rep.mean_err2 = acc.err2_sum[l] / nodes;
        rep.mean_m_dis = acc.mdis_sum[l] / nodes;
        rep.ratio = l == 0 ? 0.0 : rep.d_total / acc.levels[l - 1].d_total;
    }
    out.levels = std::move(acc.levels);
    out.top = std::move(top.crossing);
    out.top_field = std::move(top.field);
    out.top_plan = std::move(top.plan);
    out.top_diagnostics = top.diagnostics;
    return out;
}

}  // namespace fpp
