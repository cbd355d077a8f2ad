#ifndef SLEPIAN_LAB_SLEPIAN_HPP
#define SLEPIAN_LAB_SLEPIAN_HPP

#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

#include "slepian_lab/grid_path.hpp"
#include "slepian_lab/paths.hpp"
#include "slepian_lab/rng.hpp"

namespace slepian_lab::slepian {

/// Location of a zero of a grid path, interpolated inside the bracketing
/// cell [left_index, left_index + 1].
struct ZeroCrossing {
    double time = 0.0;
    std::size_t left_index = 0;
};

/// S_t = B_{t+1} - B_t read off a Brownian grid covering [0, H+1].
/// The unit window must align with the grid (1/dt integer).
inline GridPath slepian_from_bm(const GridPath& bm) {
    const std::size_t n = steps_per_unit(bm.dt);
    if (bm.size() < n + 2)
        throw std::invalid_argument("slepian_from_bm: path must cover at least 1 + dt of time");
    GridPath out{bm.t0, bm.dt, std::vector<double>(bm.size() - n)};
    for (std::size_t j = 0; j + n < bm.size(); ++j) out.values[j] = bm.values[j + n] - bm.values[j];
    return out;
}

/// Alternative construction on [0, horizon] from i.i.d. standard bridges
/// b^k and i.i.d. normals Z_k:
///   Z_t = b^{k+1}_{t-k} - b^k_{t-k} + (k+1-t) Z_k + (t-k) Z_{k+1},  t in [k, k+1).
/// Same law as slepian_from_bm output; used as the equality-in-law oracle.
inline GridPath slepian_from_bridges(SeedSpec seed, int horizon, double dt) {
    if (horizon < 1) throw std::invalid_argument("slepian_from_bridges: horizon must be a positive integer");
    const std::size_t n = steps_per_unit(dt);
    RandomStream rng(seed);
    const auto h = static_cast<std::size_t>(horizon);

    std::vector<double> z(h + 1);
    for (auto& v : z) v = rng.normal();

    // bridges b^0..b^h, each on [0,1] as B_u - u B_1
    std::vector<std::vector<double>> br(h + 1, std::vector<double>(n + 1));
    const double sd = std::sqrt(dt);
    for (auto& bridge : br) {
        bridge[0] = 0.0;
        for (std::size_t i = 1; i <= n; ++i) bridge[i] = bridge[i - 1] + sd * rng.normal();
        const double b1 = bridge[n];
        for (std::size_t i = 1; i < n; ++i)
            bridge[i] -= (static_cast<double>(i) / static_cast<double>(n)) * b1;
        bridge[n] = 0.0;
    }

    GridPath out{0.0, dt, std::vector<double>(h * n + 1)};
    for (std::size_t k = 0; k < h; ++k) {
        for (std::size_t i = 0; i < n; ++i) {
            const double u = static_cast<double>(i) / static_cast<double>(n);
            out.values[k * n + i] = br[k + 1][i] - br[k][i] + (1.0 - u) * z[k] + u * z[k + 1];
        }
    }
    out.values[h * n] = z[h];
    return out;
}

/// Deterministic zero scan: a cell [j, j+1] carries a crossing when the
/// left value is exactly zero or the endpoint signs differ; the location is
/// linearly interpolated. An exact zero at the final grid point counts.
inline std::vector<ZeroCrossing> zero_crossings(const GridPath& path) {
    std::vector<ZeroCrossing> out;
    if (path.size() < 2) {
        if (path.size() == 1 && path.values[0] == 0.0) out.push_back({path.t0, 0});
        return out;
    }
    for (std::size_t j = 0; j + 1 < path.size(); ++j) {
        const double a = path.values[j], b = path.values[j + 1];
        if (a == 0.0) {
            out.push_back({path.time_at(j), j});
        } else if ((a > 0.0 && b < 0.0) || (a < 0.0 && b > 0.0)) {
            const double frac = a / (a - b);
            out.push_back({path.time_at(j) + frac * path.dt, j});
        }
    }
    if (path.values.back() == 0.0) out.push_back({path.time_at(path.size() - 1), path.size() - 2});
    return out;
}

/// Zero scan with sub-grid refinement. Conditional on the grid values, the
/// path inside a cell is the linear interpolation plus an independent
/// Brownian bridge with variance rate sigma2_rate (2 for a unit-window
/// difference of Brownian motion), so a same-sign cell (a, b) hides a
/// crossing with probability exp(-2ab/(sigma2_rate dt)). Hidden crossing
/// locations are drawn uniformly in the cell. Removes the O(sqrt(dt))
/// detection deficit of the plain scan.
inline std::vector<ZeroCrossing> zero_crossings_refined(const GridPath& path, RandomStream& rng,
                                                        double sigma2_rate = 2.0) {
    std::vector<ZeroCrossing> out;
    const double inv = 2.0 / (sigma2_rate * path.dt);
    for (std::size_t j = 0; j + 1 < path.size(); ++j) {
        const double a = path.values[j], b = path.values[j + 1];
        if (a == 0.0) {
            out.push_back({path.time_at(j), j});
        } else if ((a > 0.0 && b < 0.0) || (a < 0.0 && b > 0.0)) {
            const double frac = a / (a - b);
            out.push_back({path.time_at(j) + frac * path.dt, j});
        } else if (rng.uniform01() < std::exp(-std::abs(a * b) * inv)) {
            out.push_back({path.time_at(j) + rng.uniform01() * path.dt, j});
        }
    }
    if (path.values.back() == 0.0) out.push_back({path.time_at(path.size() - 1), path.size() - 2});
    return out;
}

/// First zero of the path, or none if the path never changes sign.
inline std::optional<ZeroCrossing> first_zero(const GridPath& path) {
    if (path.size() == 0) throw std::invalid_argument("first_zero: empty path");
    for (std::size_t j = 0; j + 1 < path.size(); ++j) {
        const double a = path.values[j], b = path.values[j + 1];
        if (a == 0.0) return ZeroCrossing{path.time_at(j), j};
        if ((a > 0.0 && b < 0.0) || (a < 0.0 && b > 0.0))
            return ZeroCrossing{path.time_at(j) + a / (a - b) * path.dt, j};
    }
    if (path.values.back() == 0.0)
        return ZeroCrossing{path.time_at(path.size() - 1), path.size() - 2};
    return std::nullopt;
}

/// Last zero at or before time t; none if there is no zero up to t.
/// (Callers map none to the sup-empty-set convention G = 0.)
inline std::optional<ZeroCrossing> last_zero_before(const GridPath& path, double t) {
    if (path.size() == 0) throw std::invalid_argument("last_zero_before: empty path");
    if (t < path.t0 - 1e-12 || t > path.t0 + path.duration() + 1e-12)
        throw std::invalid_argument("last_zero_before: t outside the path domain");
    std::optional<ZeroCrossing> best;
    for (const auto& zc : zero_crossings(path)) {
        if (zc.time <= t) best = zc;
    }
    return best;
}

/// One draw of (S_0, S_1, F, G) for the Slepian process on [0,1],
/// conditioned on 0 < F < G < 1.
struct Quadruple {
    double s0 = 0.0;
    double s1 = 0.0;
    double f = 0.0;
    double g = 0.0;
};

struct QuadrupleSample {
    enum class Status { accepted, no_zero, single_crossing };
    Status status = Status::no_zero;
    Quadruple quadruple;
};

/// Slepian path on [0,1] together with its refined crossing set, for
/// callers that need the full decomposition (F, G and the path between).
struct SlepianUnitSample {
    GridPath s;
    std::vector<ZeroCrossing> crossings;
};

inline SlepianUnitSample sample_slepian_unit(SeedSpec seed, double dt, double horizon = 1.0) {
    const std::size_t n = steps_per_unit(dt);
    RandomStream rng(seed);
    const auto total = static_cast<std::size_t>(std::llround(horizon * static_cast<double>(n))) + n;
    GridPath bm{0.0, dt, std::vector<double>(total + 1)};
    const double sd = std::sqrt(dt);
    bm.values[0] = 0.0;
    for (std::size_t i = 1; i <= total; ++i) bm.values[i] = bm.values[i - 1] + sd * rng.normal();
    GridPath s = slepian_from_bm(bm);
    auto crossings = zero_crossings_refined(s, rng);
    return {std::move(s), std::move(crossings)};
}

/// Sample the quadruple; rejections distinguish {no zero on [0,1]} from
/// single-crossing grid artifacts (the continuum event F = G is null).
inline QuadrupleSample sample_quadruple(SeedSpec seed, double dt) {
    auto unit = sample_slepian_unit(seed, dt);
    QuadrupleSample out;
    if (unit.crossings.empty()) {
        out.status = QuadrupleSample::Status::no_zero;
        return out;
    }
    const double f = unit.crossings.front().time;
    const double g = unit.crossings.back().time;
    const double s0 = unit.s.values.front();
    const double s1 = unit.s.values.back();
    if (!(f < g) || !(f > 0.0) || !(g < 1.0) || s0 == 0.0 || s1 == 0.0) {
        out.status = QuadrupleSample::Status::single_crossing;
        return out;
    }
    out.status = QuadrupleSample::Status::accepted;
    out.quadruple = {s0, s1, f, g};
    return out;
}

/// Window (B_{F+u} - B_F; 0 <= u <= 1) where F is the first zero of
/// S = B_{.+1} - B_., found by chunked extension of B. Returns none when no
/// zero appears before horizon_cap. The window is anchored at the crossing
/// cell endpoint with the smaller |S|.
inline std::optional<GridPath> sample_bridge_like_window(SeedSpec seed, double dt,
                                                         double horizon_cap = 64.0) {
    if (!(horizon_cap >= 2.0))
        throw std::invalid_argument("sample_bridge_like_window: horizon_cap must be >= 2");
    const std::size_t n = steps_per_unit(dt);
    const auto max_cells = static_cast<std::size_t>(std::llround(horizon_cap / dt));
    RandomStream rng(seed);
    const double sd = std::sqrt(dt);
    const double inv = 1.0 / dt;  // 2ab/(sigma2 dt) with sigma2 = 2

    std::vector<double> b;
    b.reserve(2 * n + 1);
    b.push_back(0.0);
    auto extend_to = [&](std::size_t size_needed) {
        while (b.size() < size_needed) b.push_back(b.back() + sd * rng.normal());
    };

    extend_to(n + 2);
    double s_left = b[n] - b[0];
    for (std::size_t j = 0; j < max_cells; ++j) {
        extend_to(j + n + 2);
        const double s_right = b[j + 1 + n] - b[j + 1];
        const bool sign_change = (s_left > 0.0 && s_right < 0.0) || (s_left < 0.0 && s_right > 0.0);
        bool crossed = sign_change || s_left == 0.0;
        if (!crossed && rng.uniform01() < std::exp(-std::abs(s_left * s_right) * inv))
            crossed = true;
        if (crossed) {
            const std::size_t anchor = std::abs(s_left) <= std::abs(s_right) ? j : j + 1;
            extend_to(anchor + n + 1);
            GridPath window{0.0, dt, std::vector<double>(n + 1)};
            const double base = b[anchor];
            for (std::size_t k = 0; k <= n; ++k) window.values[k] = b[anchor + k] - base;
            return window;
        }
        s_left = s_right;
    }
    return std::nullopt;
}

}  // namespace slepian_lab::slepian

#endif
