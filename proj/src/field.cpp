#include "fpp/field.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace fpp {

const char* to_string(FieldKind kind) {
    switch (kind) {
        case FieldKind::Brw: return "brw";
        case FieldKind::ConcatBrw: return "concat-brw";
        case FieldKind::Chi: return "chi";
        case FieldKind::TildeChi: return "tilde-chi";
    }
    return "?";
}

FieldKind parse_field_kind(const std::string& name) {
    if (name == "brw") return FieldKind::Brw;
    if (name == "concat-brw" || name == "concat") return FieldKind::ConcatBrw;
    if (name == "chi") return FieldKind::Chi;
    if (name == "tilde-chi") return FieldKind::TildeChi;
    throw std::invalid_argument("unknown field kind: " + name);
}

bool in_origin_lattice(Point u, int level, int gamma_cells) {
    const std::int64_t side = std::int64_t{1} << level;
    return u.x % (gamma_cells * side) == 0 && u.y % side == 0;
}

void FieldSpec::validate(int max_level) const {
    if (n < 0 || n > max_level)
        throw std::invalid_argument("field level " + std::to_string(n) + " outside [0, " +
                                    std::to_string(max_level) + "]");
    if (gamma_cells < 1 || gamma_cells % 2 == 0)
        throw std::invalid_argument("cell count must be an odd positive integer");
    if (kind == FieldKind::Brw && gamma_cells != 1)
        throw std::invalid_argument("a plain BRW lives on a single cell");
    if (!in_origin_lattice(origin, n, gamma_cells))
        throw std::invalid_argument("origin is not aligned to the level-n origin lattice");
    const std::int64_t limit = std::int64_t{1} << 40;
    if (std::llabs(origin.x) > limit || std::llabs(origin.y) > limit)
        throw std::invalid_argument("origin overflows the lattice bounds");
}

LevelCoeffs level_coeffs(int level) {
    if (level < 1) throw std::invalid_argument("level coefficients need level >= 1");
    const double a2 = 1.0 - std::ldexp(1.0, -2 * level);
    return {std::sqrt(a2 / 3.0), std::sqrt(2.0 * a2 / 3.0)};
}

DyadicKey tilde_r_lookup(int k, int j, int gamma_cells, Point u, int level) {
    if (k < 1 || k > 2 || j < 1 || j > gamma_cells)
        throw std::invalid_argument("column index out of range");
    int kk = k;
    int jj = j;
    if (((k - 1) * gamma_cells + j) % 2 == 0) {
        if (j > 1) {
            jj = j - 1;
        } else {
            if (k == 1) throw std::logic_error("even first column needs an even cell count");
            kk = k - 1;
            jj = gamma_cells;
        }
    }
    const std::int64_t side = std::int64_t{1} << level;
    return {KeyKind::StackedRect, static_cast<std::uint32_t>(level),
            {u.x + ((kk - 1) * gamma_cells + (jj - 1)) * side, u.y}, 0};
}

DyadicKey brownian_slot_key(int k, int j, int gamma_cells, Point u, int level) {
    return {KeyKind::BmIncrement, static_cast<std::uint32_t>(level), u,
            static_cast<std::uint64_t>((k - 1) * gamma_cells + j)};
}

SwitchTerm switch_term(int gamma_cells, Point parent_origin, int child_level, int i, int k, int j) {
    const LevelCoeffs lc = level_coeffs(child_level + 1);
    const int column = (k - 1) * gamma_cells + j;
    SwitchTerm t;
    t.rect_key = tilde_r_lookup(k, j, gamma_cells, parent_origin, child_level);
    t.rect_coeff = (column % 2 == 1 ? -1.0 : 1.0) * lc.b;
    t.box_key = brownian_slot_key(k, j, gamma_cells, parent_origin, child_level);
    t.box_coeff = (i == 1 ? -1.0 : 1.0) * lc.c;
    return t;
}

namespace {

struct StepTerms {
    std::array<std::pair<DyadicKey, double>, 2> terms;
    int count = 0;

    void add(const DyadicKey& key, double coeff) { terms[count++] = {key, coeff}; }
    double evaluate(const GaussianSource& source) const {
        double v = 0.0;
        for (int t = 0; t < count; ++t) v += terms[t].second * source(terms[t].first);
        return v;
    }
};

int num_steps(const FieldSpec& spec) {
    if (spec.kind == FieldKind::TildeChi && spec.n > 0) return spec.n + 1;
    return spec.n;
}

// Side of the blocks on which step `idx` is constant.
std::int64_t step_block_side(int idx) {
    return std::int64_t{1} << idx;
}

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
    std::int64_t q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

StepTerms step_terms(const FieldSpec& spec, int idx, Point z) {
    StepTerms out;
    const std::int64_t h = step_block_side(idx);
    switch (spec.kind) {
        case FieldKind::Brw:
        case FieldKind::ConcatBrw:
            out.add({KeyKind::Box, static_cast<std::uint32_t>(idx),
                     {floor_div(z.x, h) * h, floor_div(z.y, h) * h}, 0},
                    1.0);
            return out;
        case FieldKind::Chi:
        case FieldKind::TildeChi: {
            if (idx == spec.n) {
                const std::int64_t side = spec.side();
                const std::int64_t cx = spec.origin.x + (spec.cell_of(z) - 1) * side;
                out.add({KeyKind::Box, static_cast<std::uint32_t>(spec.n), {cx, spec.origin.y}, 0},
                        level_coeffs(spec.n).b);
                return out;
            }
            // Assemble side 2h from the side-h sub-fields.
            const std::int64_t pw = spec.gamma_cells * 2 * h;
            const std::int64_t ph = 2 * h;
            const std::int64_t dx = z.x - spec.origin.x;
            const std::int64_t dy = z.y - spec.origin.y;
            const Point parent{spec.origin.x + (dx / pw) * pw, spec.origin.y + (dy / ph) * ph};
            const std::int64_t rx = dx % pw;
            const std::int64_t ry = dy % ph;
            const int k = static_cast<int>(rx / (spec.gamma_cells * h)) + 1;
            const int j = static_cast<int>((rx % (spec.gamma_cells * h)) / h) + 1;
            const int i = ry >= h ? 1 : 2;
            const SwitchTerm t = switch_term(spec.gamma_cells, parent, idx, i, k, j);
            out.add(t.rect_key, t.rect_coeff);
            out.add(t.box_key, t.box_coeff);
            return out;
        }
    }
    return out;
}

void require_inside(const FieldSpec& spec, Point z) {
    if (!spec.rect().contains(z)) throw std::out_of_range("point outside the field rectangle");
}

// Per-step block values; block (bx, by) covers [x0 + bx h, ...] x [y0 + by h, ...].
void fill_block_values(const FieldSpec& spec, const GaussianSource& source, int idx,
                       std::vector<double>& blocks, std::int64_t bw, std::int64_t bh, bool parallel) {
    const Rect r = spec.rect();
    const std::int64_t h = step_block_side(idx);
    blocks.assign(static_cast<std::size_t>(bw * bh), 0.0);
#pragma omp parallel for schedule(static) if (parallel)
    for (std::int64_t b = 0; b < bw * bh; ++b) {
        const Point corner{r.x0 + (b % bw) * h, r.y0 + (b / bw) * h};
        blocks[static_cast<std::size_t>(b)] = step_terms(spec, idx, corner).evaluate(source);
    }
}

}  // namespace

double CoeffVector::evaluate(const GaussianSource& source) const {
    double v = 0.0;
    for (const auto& [key, coeff] : terms) v += coeff * source(key);
    return v;
}

std::size_t CoeffVector::nonzeros() const {
    return static_cast<std::size_t>(
        std::count_if(terms.begin(), terms.end(), [](const auto& t) { return t.second != 0.0; }));
}

double inner_product(const CoeffVector& a, const CoeffVector& b) {
    auto sa = a.terms;
    auto sb = b.terms;
    auto by_key = [](const auto& l, const auto& r) { return l.first < r.first; };
    std::sort(sa.begin(), sa.end(), by_key);
    std::sort(sb.begin(), sb.end(), by_key);
    double acc = 0.0;
    std::size_t p = 0;
    std::size_t q = 0;
    while (p < sa.size() && q < sb.size()) {
        if (sa[p].first < sb[q].first) {
            ++p;
        } else if (sb[q].first < sa[p].first) {
            ++q;
        } else {
            acc += sa[p].second * sb[q].second;
            ++p;
            ++q;
        }
    }
    return acc;
}

CoeffVector coeff_vector(const FieldSpec& spec, Point z) {
    spec.validate(62);
    require_inside(spec, z);
    CoeffVector out;
    const int steps = num_steps(spec);
    for (int idx = 0; idx < steps; ++idx) {
        const StepTerms st = step_terms(spec, idx, z);
        for (int t = 0; t < st.count; ++t) out.terms.push_back(st.terms[t]);
    }
    return out;
}

double exact_cov(const FieldSpec& spec, Point z1, Point z2) {
    return inner_product(coeff_vector(spec, z1), coeff_vector(spec, z2));
}

FieldSample sample_field(const FieldSpec& spec, const GaussianSource& source, Exec exec,
                         int max_level) {
    spec.validate(max_level);
    const Rect r = spec.rect();
    FieldSample out{spec, std::vector<double>(static_cast<std::size_t>(r.area()), 0.0)};
    const bool parallel = exec == Exec::Parallel;
    std::vector<double> blocks;
    for (int idx = 0; idx < num_steps(spec); ++idx) {
        const std::int64_t h = step_block_side(idx);
        const std::int64_t bw = r.width / h;
        const std::int64_t bh = r.height / h;
        fill_block_values(spec, source, idx, blocks, bw, bh, parallel);
        double* values = out.values.data();
        const double* bv = blocks.data();
#pragma omp parallel for schedule(static) if (parallel)
        for (std::int64_t y = 0; y < r.height; ++y) {
            double* row = values + y * r.width;
            const double* brow = bv + (y / h) * bw;
            for (std::int64_t x = 0; x < r.width; ++x) row[x] += brow[x / h];
        }
    }
    return out;
}

}  // namespace fpp
