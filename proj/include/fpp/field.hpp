#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fpp/gaussian.hpp"
#include "fpp/lattice.hpp"

namespace fpp {

enum class FieldKind : std::uint8_t { Brw = 0, ConcatBrw = 1, Chi = 2, TildeChi = 3 };

const char* to_string(FieldKind kind);
FieldKind parse_field_kind(const std::string& name);

enum class Exec { Serial, Parallel };

inline constexpr int kDefaultMaxLevel = 15;

// Geometry of a field over V_N^Gamma shifted by `origin`: Gamma side-by-side
// cells of side N = 2^n, lower-left corner at `origin`.
struct FieldSpec {
    FieldKind kind = FieldKind::Brw;
    int n = 0;
    int gamma_cells = 1;
    Point origin;

    std::int64_t side() const { return std::int64_t{1} << n; }
    Rect rect() const { return {origin.x, origin.y, gamma_cells * side(), side()}; }
    // 1-based cell index of a point inside rect().
    int cell_of(Point z) const { return static_cast<int>((z.x - origin.x) / side()) + 1; }

    // Throws std::invalid_argument on an odd-Gamma, Brw-Gamma, origin
    // alignment or level-limit violation.
    void validate(int max_level = kDefaultMaxLevel) const;
};

struct LevelCoeffs {
    double b = 0.0;
    double c = 0.0;
};

// b = sqrt((1 - 4^-l) / 3), c = sqrt(2 (1 - 4^-l) / 3); requires l >= 1.
LevelCoeffs level_coeffs(int level);

// A lattice origin u belongs to A_{level,Gamma} when u.x is a multiple of
// Gamma 2^level and u.y a multiple of 2^level.
bool in_origin_lattice(Point u, int level, int gamma_cells);

// Key of the stacked rectangle paired with column (k, j) when the field on
// V_{2L}^{Gamma,u} is assembled from side-L sub-fields, L = 2^level.
// k in {1, 2}, j in [1, Gamma].
DyadicKey tilde_r_lookup(int k, int j, int gamma_cells, Point u, int level);

// Key of the Gaussian attached to the row-2 box B_{level;2,k,j}: a unit
// increment of the Brownian stream W^{u,level} over time slot (k-1)Gamma + j.
DyadicKey brownian_slot_key(int k, int j, int gamma_cells, Point u, int level);

// One switched-sign increment Z_{i,k,j} = rect_coeff a_R + box_coeff a_B used
// when going from side L = 2^child_level to 2L. Row i = 1 is the top row.
struct SwitchTerm {
    DyadicKey rect_key;
    double rect_coeff = 0.0;
    DyadicKey box_key;
    double box_coeff = 0.0;

    double value(const GaussianSource& source) const {
        return rect_coeff * source(rect_key) + box_coeff * source(box_key);
    }
};

SwitchTerm switch_term(int gamma_cells, Point parent_origin, int child_level, int i, int k, int j);

// Sparse linear representation of one field value over the unit Gaussians.
struct CoeffVector {
    std::vector<std::pair<DyadicKey, double>> terms;

    double evaluate(const GaussianSource& source) const;
    std::size_t nonzeros() const;
};

double inner_product(const CoeffVector& a, const CoeffVector& b);

CoeffVector coeff_vector(const FieldSpec& spec, Point z);

// Exact covariance of the field values at z1 and z2.
double exact_cov(const FieldSpec& spec, Point z1, Point z2);

struct FieldSample {
    FieldSpec spec;
    std::vector<double> values;  // row-major, y outer, Gamma 2^n x 2^n

    double at(Point z) const {
        const Rect r = spec.rect();
        return values[static_cast<std::size_t>((z.y - r.y0) * r.width + (z.x - r.x0))];
    }
};

// Realizes the field level by level; both execution modes give identical
// values. The serial mode is the reference implementation.
FieldSample sample_field(const FieldSpec& spec, const GaussianSource& source,
                         Exec exec = Exec::Parallel, int max_level = kDefaultMaxLevel);

}  // namespace fpp
