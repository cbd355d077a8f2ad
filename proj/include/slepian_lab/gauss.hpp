#ifndef SLEPIAN_LAB_GAUSS_HPP
#define SLEPIAN_LAB_GAUSS_HPP

#include <cmath>

namespace slepian_lab::gauss {

inline constexpr double inv_sqrt_2pi = 0.3989422804014326779;

/// Standard normal density.
inline double phi(double x) { return inv_sqrt_2pi * std::exp(-0.5 * x * x); }

/// Scaled normal density phi_theta(x) = phi(x / sqrt(theta)) / sqrt(theta).
inline double phi_theta(double x, double theta) {
    const double s = std::sqrt(theta);
    return phi(x / s) / s;
}

/// Standard normal CDF via erfc; absolute error below 1e-12 everywhere.
inline double Phi(double x) { return 0.5 * std::erfc(-x * 0.7071067811865475244); }

}  // namespace slepian_lab::gauss

#endif
