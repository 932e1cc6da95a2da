#pragma once
#include <cmath>
#include <random>

#include "relmech/geometry.hpp"
#include "relmech/linalg.hpp"

// Test-only helpers: the polar <-> Cartesian oracle and random smooth paths.
namespace testing {

using relmech::Coords;
using relmech::Path;
using relmech::TangentVector;

inline Coords polar_to_cartesian_point(const Coords& p) {
    return {p[0] * std::cos(p[1]), p[0] * std::sin(p[1])};
}

// Jacobian d(x, y)/d(r, theta) applied to polar components.
inline Coords polar_to_cartesian_comps(const Coords& p, const Coords& v) {
    const double r = p[0], th = p[1];
    return {std::cos(th) * v[0] - r * std::sin(th) * v[1], std::sin(th) * v[0] + r * std::cos(th) * v[1]};
}

inline Coords cartesian_to_polar_comps(const Coords& p, const Coords& w) {
    const double r = p[0], th = p[1];
    return {std::cos(th) * w[0] + std::sin(th) * w[1], (-std::sin(th) * w[0] + std::cos(th) * w[1]) / r};
}

// Parallel transport in the flat plane is the identity on Cartesian components,
// so the polar answer is: map to Cartesian, keep, map back at the destination.
inline Coords polar_parallel_oracle(const Coords& from, const Coords& to, const Coords& v) {
    return cartesian_to_polar_comps(to, polar_to_cartesian_comps(from, v));
}

// Unit circle theta: 0 -> u in polar coordinates.
inline Path polar_unit_circle(double theta_end) {
    return Path(
        0.0, theta_end, [](double u) { return Coords{1.0, u}; }, [](double) { return Coords{0.0, 1.0}; });
}

// Smooth polar path staying in r in [0.6, 2.4], parameter span [0, L].
inline Path random_polar_path(std::mt19937_64& rng, double L) {
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    const double r0 = 1.5 + 0.3 * U(rng), ar = 0.5 * U(rng), wr = 1.0 + 0.5 * U(rng), pr = 3.0 * U(rng);
    const double th0 = 3.0 * U(rng), bt = 0.6 * U(rng), at = 0.4 * U(rng), wt = 1.0 + 0.5 * U(rng);
    return Path(
        0.0, L,
        [=](double u) { return Coords{r0 + ar * std::sin(wr * u + pr), th0 + bt * u + at * std::cos(wt * u)}; },
        [=](double u) { return Coords{ar * wr * std::cos(wr * u + pr), bt - at * wt * std::sin(wt * u)}; });
}

inline Coords random_coords(std::mt19937_64& rng, std::size_t n, double scale = 1.0) {
    std::uniform_real_distribution<double> U(-scale, scale);
    Coords c(n);
    for (auto& x : c) x = U(rng);
    return c;
}

}  // namespace testing
