#ifndef SLEPIAN_LAB_LOCALTIME_HPP
#define SLEPIAN_LAB_LOCALTIME_HPP

#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "slepian_lab/gauss.hpp"
#include "slepian_lab/grid_path.hpp"
#include "slepian_lab/rng.hpp"

namespace slepian_lab::localtime {

/// How the band-occupation time is scaled into local time.
///   asymptotic: sqrt(pi/2)/epsilon, the limit normalization.
///   exact_band: 1/(2 Phi(eps) - 1), which makes E Gamma[0,1] equal 1
///   exactly at this epsilon. The two agree to O(eps^2); the exact variant
///   keeps Gamma[0,t] - t drift-free, which the allocation-time search
///   needs (a relative intensity deficit delta leaves a ~2*delta fraction
///   of paths where Gamma[0,t] never catches t).
enum class Normalization { asymptotic, exact_band };

inline double band_rate(double epsilon, Normalization norm) {
    if (norm == Normalization::exact_band) return 1.0 / (2.0 * gauss::Phi(epsilon) - 1.0);
    return std::sqrt(M_PI / 2.0) / epsilon;
}

/// Cumulative local-time approximation t -> Gamma[0,t] built from a
/// Slepian path: increments rate*dt on cells whose left value lies in the
/// band |S| <= epsilon, zero elsewhere.
struct LocalTimeProfile {
    double dt = 0.0;
    double epsilon = 0.0;
    double rate = 0.0;
    std::vector<double> cumulative;  // cumulative[i] = Gamma[0, i*dt]; cumulative[0] = 0

    double total() const { return cumulative.back(); }
};

inline double epsilon_floor(double dt) { return 4.0 * std::sqrt(dt); }

inline LocalTimeProfile local_time_profile(const GridPath& slepian_path, double epsilon,
                                           Normalization norm = Normalization::asymptotic) {
    if (slepian_path.size() < 2) throw std::invalid_argument("local_time_profile: path too short");
    const double floor = epsilon_floor(slepian_path.dt);
    if (!(epsilon >= floor))
        throw std::invalid_argument("local_time_profile: epsilon below the grid floor 4*sqrt(dt) = " +
                                    std::to_string(floor));
    LocalTimeProfile p;
    p.dt = slepian_path.dt;
    p.epsilon = epsilon;
    p.rate = band_rate(epsilon, norm);
    p.cumulative.resize(slepian_path.size());
    p.cumulative[0] = 0.0;
    const double gain = p.rate * p.dt;
    for (std::size_t i = 0; i + 1 < slepian_path.size(); ++i)
        p.cumulative[i + 1] =
            p.cumulative[i] + (std::abs(slepian_path.values[i]) <= epsilon ? gain : 0.0);
    return p;
}

/// First t > 0 with Gamma[0,t] >= t, refined by linear interpolation in the
/// crossing cell (both sides are piecewise linear). A profile that exceeds
/// t already in the first cell yields the degenerate answer 0 (callers flag
/// T < dt). Returns none when Gamma never catches t within the profile.
inline std::optional<double> allocation_time(const LocalTimeProfile& profile) {
    const double dt = profile.dt;
    double d_prev = 0.0;
    for (std::size_t j = 1; j < profile.cumulative.size(); ++j) {
        const double d = profile.cumulative[j] - static_cast<double>(j) * dt;
        if (d >= 0.0) {
            if (j == 1) return 0.0;  // degenerate immediate crossing
            if (d == d_prev) return static_cast<double>(j) * dt;
            const double frac = -d_prev / (d - d_prev);
            return (static_cast<double>(j - 1) + frac) * dt;
        }
        d_prev = d;
    }
    return std::nullopt;
}

/// One embedding draw: the allocation time and the window it selects.
struct EmbeddingResult {
    double t_alloc = 0.0;
    GridPath window;       // B_{T+u} - B_T on the unit grid; value[0] = 0
    double endpoint = 0.0; // window value at u = 1
    double horizon_used = 0.0;
    bool degenerate = false;  // T < dt (S_0 already inside the band)
};

/// Simulate B in unit chunks, maintain S and Gamma incrementally, stop at
/// the first Gamma-t crossing and return the unit window there. The window
/// anchor is the crossing-cell endpoint with the smaller |S|, which keeps
/// |endpoint| <= epsilon. Returns none when no crossing occurs before
/// horizon_cap time units.
inline std::optional<EmbeddingResult> embed_bridge(SeedSpec seed, double dt, double epsilon,
                                                   double horizon_cap = 64.0,
                                                   Normalization norm = Normalization::exact_band) {
    if (!(horizon_cap >= 4.0)) throw std::invalid_argument("embed_bridge: horizon_cap must be >= 4");
    const double floor = epsilon_floor(dt);
    if (!(epsilon >= floor))
        throw std::invalid_argument("embed_bridge: epsilon below the grid floor 4*sqrt(dt) = " +
                                    std::to_string(floor));
    const std::size_t n = steps_per_unit(dt);
    const auto max_cells = static_cast<std::size_t>(std::llround(horizon_cap / dt));
    RandomStream rng(seed);
    const double sd = std::sqrt(dt);
    const double gain = band_rate(epsilon, norm) * dt;

    // ring of the last n+1 B values; b_ring[i % (n+1)] = B_i
    std::vector<double> ring(n + 1);
    ring[0] = 0.0;
    double b_cur = 0.0;
    for (std::size_t i = 1; i <= n; ++i) {
        b_cur += sd * rng.normal();
        ring[i] = b_cur;
    }

    double d_prev = 0.0, d_cross = 0.0, s_at = 0.0;
    std::size_t cross_cell = 0, pos = 0;  // ring slot of B_j; avoids % in the hot loop
    bool found = false;
    for (std::size_t j = 0; j < max_cells; ++j) {
        const double s_j = b_cur - ring[pos];  // b_cur holds B_{j+n}
        const double d = d_prev + (std::abs(s_j) <= epsilon ? gain : 0.0) - dt;
        if (d >= 0.0) {
            found = true;
            cross_cell = j;
            s_at = s_j;
            d_cross = d;
            break;
        }
        d_prev = d;
        b_cur += sd * rng.normal();
        ring[pos] = b_cur;  // slot of B_j now holds B_{j+n+1}
        if (++pos == n + 1) pos = 0;
    }
    if (!found) return std::nullopt;

    EmbeddingResult res;
    res.horizon_used = static_cast<double>(cross_cell + 1) * dt;
    if (cross_cell == 0) {
        res.t_alloc = 0.0;
        res.degenerate = true;
    } else if (d_cross == d_prev) {
        res.t_alloc = static_cast<double>(cross_cell + 1) * dt;
    } else {
        const double frac = -d_prev / (d_cross - d_prev);
        res.t_alloc = (static_cast<double>(cross_cell) + frac) * dt;
        res.degenerate = res.t_alloc < dt;
    }

    // ring currently holds B_{cross_cell} .. B_{cross_cell+n}; one more step
    // gives S at the right cell edge (overwriting B_{cross_cell}, saved first)
    const double base_left = ring[cross_cell % (n + 1)];
    b_cur += sd * rng.normal();
    ring[(cross_cell + n + 1) % (n + 1)] = b_cur;
    const double s_next = b_cur - ring[(cross_cell + 1) % (n + 1)];

    const std::size_t anchor = std::abs(s_at) <= std::abs(s_next) ? cross_cell : cross_cell + 1;
    const double base = anchor == cross_cell ? base_left : ring[(cross_cell + 1) % (n + 1)];
    res.window.t0 = 0.0;
    res.window.dt = dt;
    res.window.values.resize(n + 1);
    res.window.values[0] = 0.0;
    for (std::size_t k = 1; k <= n; ++k)
        res.window.values[k] = ring[(anchor + k) % (n + 1)] - base;
    res.endpoint = res.window.values[n];
    return res;
}

}  // namespace slepian_lab::localtime

#endif
