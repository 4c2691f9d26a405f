#include "fpp/gaussian.hpp"

#include <cmath>

#include <boost/math/special_functions/erf.hpp>

namespace fpp {

bool DyadicKey::aligned() const {
    if (kind == KeyKind::BmIncrement) return true;
    if (level >= 62) return false;
    const std::int64_t side = std::int64_t{1} << level;
    return corner.x % side == 0 && corner.y % side == 0;
}

// splitmix64 finalizer.
std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t hash_combine(std::uint64_t h, std::uint64_t v) {
    return mix64(h ^ mix64(v + 0x632be59bd9b4e019ULL));
}

double gaussian_from_bits(std::uint64_t bits) {
    // Uniform on the open interval (0, 1) with 53 bits.
    const double u = (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
    return -M_SQRT2 * boost::math::erfc_inv(2.0 * u);
}

double derive_gaussian(std::uint64_t seed, const DyadicKey& key) {
    std::uint64_t h = mix64(seed ^ 0x243f6a8885a308d3ULL);
    h = hash_combine(h, static_cast<std::uint64_t>(key.kind));
    h = hash_combine(h, key.level);
    h = hash_combine(h, static_cast<std::uint64_t>(key.corner.x));
    h = hash_combine(h, static_cast<std::uint64_t>(key.corner.y));
    h = hash_combine(h, key.stream);
    return gaussian_from_bits(h);
}

}  // namespace fpp
