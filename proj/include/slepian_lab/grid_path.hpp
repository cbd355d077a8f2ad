#ifndef SLEPIAN_LAB_GRID_PATH_HPP
#define SLEPIAN_LAB_GRID_PATH_HPP

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace slepian_lab {

/// A continuous-time path sampled on a uniform grid: values at
/// t0, t0 + dt, t0 + 2 dt, ...
struct GridPath {
    double t0 = 0.0;
    double dt = 0.0;
    std::vector<double> values;

    std::size_t size() const { return values.size(); }
    double duration() const { return (values.size() - 1) * dt; }
    double time_at(std::size_t i) const { return t0 + static_cast<double>(i) * dt; }

    /// Piecewise-linear value at time t (t within [t0, t0 + duration]).
    double at_time(double t) const {
        const double s = (t - t0) / dt;
        if (s <= 0.0) return values.front();
        const auto i = static_cast<std::size_t>(s);
        if (i + 1 >= values.size()) return values.back();
        const double frac = s - static_cast<double>(i);
        return values[i] + frac * (values[i + 1] - values[i]);
    }
};

/// Number of grid steps per unit of time. Throws unless 1/dt is an integer
/// within a small relative rounding tolerance.
inline std::size_t steps_per_unit(double dt) {
    if (!(dt > 0.0) || dt >= 1.0)
        throw std::invalid_argument("grid step must satisfy 0 < dt < 1");
    const double n = std::round(1.0 / dt);
    if (n < 2 || std::abs(n * dt - 1.0) > 1e-3)
        throw std::invalid_argument("1/dt must be an integer (within rounding tolerance)");
    return static_cast<std::size_t>(n);
}

}  // namespace slepian_lab

#endif
