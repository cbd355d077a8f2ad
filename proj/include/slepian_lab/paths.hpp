#ifndef SLEPIAN_LAB_PATHS_HPP
#define SLEPIAN_LAB_PATHS_HPP

#include <cmath>
#include <stdexcept>
#include <vector>

#include "slepian_lab/grid_path.hpp"
#include "slepian_lab/rng.hpp"

namespace slepian_lab::paths {

/// count i.i.d. standard normal variates, deterministic in the seed.
inline std::vector<double> sample_standard_normals(SeedSpec seed, std::size_t count) {
    if (count == 0) throw std::invalid_argument("count must be positive");
    RandomStream rng(seed);
    std::vector<double> out(count);
    for (auto& v : out) v = rng.normal();
    return out;
}

/// Brownian motion on [0, horizon] with step dt; value[0] = 0.
inline GridPath sample_brownian_grid(SeedSpec seed, double horizon, double dt) {
    if (!(horizon > 0.0) || !(dt > 0.0))
        throw std::invalid_argument("horizon and dt must be positive");
    if (horizon < dt) throw std::invalid_argument("horizon must be at least dt");
    const auto steps = static_cast<std::size_t>(std::llround(horizon / dt));
    RandomStream rng(seed);
    GridPath path{0.0, dt, std::vector<double>(steps + 1)};
    const double sd = std::sqrt(dt);
    path.values[0] = 0.0;
    for (std::size_t i = 1; i <= steps; ++i)
        path.values[i] = path.values[i - 1] + sd * rng.normal();
    return path;
}

/// Standard Brownian bridge on [0, 1]: b_u = B_u - u B_1 from a fresh
/// Brownian grid. Both endpoints are exactly zero.
inline GridPath sample_bridge_grid(SeedSpec seed, double dt) {
    const std::size_t n = steps_per_unit(dt);
    GridPath bm = sample_brownian_grid(seed, 1.0, dt);
    const double b1 = bm.values[n];
    for (std::size_t i = 0; i <= n; ++i) {
        const double u = static_cast<double>(i) / static_cast<double>(n);
        bm.values[i] -= u * b1;
    }
    bm.values[0] = 0.0;
    bm.values[n] = 0.0;
    return bm;
}

}  // namespace slepian_lab::paths

#endif
