#ifndef SLEPIAN_LAB_DENSITIES_HPP
#define SLEPIAN_LAB_DENSITIES_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <vector>

#include "slepian_lab/errors.hpp"
#include "slepian_lab/gauss.hpp"
#include "slepian_lab/quadrature.hpp"

namespace slepian_lab::densities {

using quadrature::QuadratureSpec;

/// Density of the first zero F of the Slepian process on (0,1):
/// f(a) = (1/pi) sqrt((2-a)/a).
inline double first_passage_density(double a) {
    if (!(a > 0.0 && a < 1.0))
        throw std::domain_error("first_passage_density: a must lie in (0,1)");
    return std::sqrt((2.0 - a) / a) / M_PI;
}

/// Joint density of (S_0, S_1, F, G) on {0 < F < G < 1}:
/// |xy| / (8 pi^2 sqrt((b-a) a^3 (1-b)^3))
///   * exp(-x^2/4a - y^2/4(1-b) - (x+y)^2/4).
inline double quadruple_density(double x, double y, double a, double b) {
    if (!(a > 0.0 && b > a && b < 1.0))
        throw std::domain_error("quadruple_density: need 0 < a < b < 1");
    const double norm = 8.0 * M_PI * M_PI * std::sqrt((b - a) * a * a * a * (1 - b) * (1 - b) * (1 - b));
    return std::abs(x * y) / norm *
           std::exp(-x * x / (4.0 * a) - y * y / (4.0 * (1.0 - b)) - (x + y) * (x + y) / 4.0);
}

/// The displayed joint (F,G) density, as printed. Its overall constant is
/// not taken on trust: fg_verification_constant() measures the ratio of
/// this expression to the numeric (x,y)-marginalization of
/// quadruple_density, and downstream uses divide by that constant.
inline double fg_density(double a, double b) {
    if (!(a > 0.0 && b > a && b < 1.0))
        throw std::domain_error("fg_density: need 0 < a < b < 1");
    const double c = 2.0 + a - b;
    return 2.0 / (M_PI * std::sqrt(b - a)) *
           (1.0 / (c * std::sqrt(a * (1.0 - b))) +
            std::atan(std::sqrt(a * (1.0 - b) / c)) / (c * std::sqrt(c)));
}

/// Numeric (x,y)-marginal of quadruple_density at fixed (a,b), by
/// quadrant-split Gauss-Legendre (the integrand's |xy| kink sits on the
/// axes, so each quadrant is smooth). Axis truncation follows the per-axis
/// Gaussian scale.
inline double fg_marginal_numeric(double a, double b, const QuadratureSpec& spec = {}) {
    spec.validate();
    if (!(a > 0.0 && b > a && b < 1.0))
        throw std::domain_error("fg_marginal_numeric: need 0 < a < b < 1");
    const int n = spec.points_per_axis;
    const double rx = spec.radius * std::sqrt(2.0 * a);
    const double ry = spec.radius * std::sqrt(2.0 * (1.0 - b));
    double total = 0.0;
    total += quadrature::integrate(
        [&](double x) {
            return quadrature::integrate(
                [&](double y) { return quadruple_density(x, y, a, b) + quadruple_density(x, -y, a, b); },
                0.0, ry, n);
        },
        0.0, rx, n);
    return 2.0 * total;
}

struct FgVerification {
    double constant = 0.0;  // mean ratio fg_density / numeric marginal
    double min_ratio = 0.0;
    double max_ratio = 0.0;
};

/// Ratio of the printed (F,G) formula to the numeric marginal, probed at
/// five interior points. The spread tells whether the printed expression is
/// proportional to the true marginal; the mean is the stored constant.
inline FgVerification fg_verification_constant(const QuadratureSpec& spec = {}) {
    static constexpr std::array<std::array<double, 2>, 5> pts{
        {{0.2, 0.7}, {0.1, 0.3}, {0.4, 0.9}, {0.25, 0.5}, {0.5, 0.8}}};
    FgVerification v;
    v.min_ratio = 1e300;
    v.max_ratio = -1e300;
    for (const auto& p : pts) {
        const double r = fg_density(p[0], p[1]) / fg_marginal_numeric(p[0], p[1], spec);
        v.constant += r / pts.size();
        v.min_ratio = std::min(v.min_ratio, r);
        v.max_ratio = std::max(v.max_ratio, r);
    }
    return v;
}

/// Total mass of quadruple_density over x,y in R, 0 < a < b < 1, by nested
/// quadrature (the (x,y) inner integral is fg_marginal_numeric). The
/// substitutions a = b sin^2(theta), b = 1 - w^2 remove the inverse-sqrt
/// edges at a=0, a=b and b=1.
inline double quadruple_mass_numeric(int outer_points = 32, const QuadratureSpec& inner = {}) {
    auto inner_b = [&](double b) {
        return quadrature::integrate(
            [&](double th) {
                const double s = std::sin(th), c = std::cos(th);
                const double a = b * s * s;
                if (!(a > 0.0 && a < b)) return 0.0;
                return fg_marginal_numeric(a, b, inner) * 2.0 * b * s * c;
            },
            0.0, M_PI / 2.0, outer_points);
    };
    return quadrature::integrate(
        [&](double w) {
            const double b = 1.0 - w * w;
            if (!(b > 0.0 && b < 1.0)) return 0.0;
            return inner_b(b) * 2.0 * w;
        },
        0.0, 1.0, outer_points);
}

/// P(F > 1) through the one-dimensional reading of the determinantal
/// formula at t=1: integral over R of Phi(0) phi(x) - phi(0) Phi(-|x|).
/// (The printed form with Phi(x) diverges; the n=1 determinant gives
/// Phi(-|x|), and the integral then equals 1/2 - 1/pi.)
inline double shepp_survival_t1(double radius = 10.0) {
    return 2.0 * quadrature::integrate(
                     [](double x) { return 0.5 * gauss::phi(x) - gauss::phi(0.0) * gauss::Phi(-x); },
                     0.0, radius, 128);
}

namespace detail {

template <int M>
inline double det_small(std::array<std::array<double, M>, M> m) {
    double det = 1.0;
    for (int c = 0; c < M; ++c) {
        int piv = c;
        for (int r = c + 1; r < M; ++r)
            if (std::abs(m[r][c]) > std::abs(m[piv][c])) piv = r;
        if (m[piv][c] == 0.0) return 0.0;
        if (piv != c) {
            std::swap(m[piv], m[c]);
            det = -det;
        }
        det *= m[c][c];
        for (int r = c + 1; r < M; ++r) {
            const double f = m[r][c] / m[c][c];
            for (int k = c; k < M; ++k) m[r][k] -= f * m[c][k];
        }
    }
    return det;
}

template <int N>  // N = number of unit intervals; matrix is (N+1)x(N+1)
inline double shepp_det(const std::array<double, N + 2>& y) {
    std::array<std::array<double, N + 1>, N + 1> m{};
    for (int i = 0; i <= N; ++i)
        for (int j = 0; j <= N; ++j) m[i][j] = gauss::phi(y[i] - y[j + 1]);
    return det_small<N + 1>(m);
}

template <int N>
inline double shepp_tensor(const QuadratureSpec& spec) {
    const int n = spec.points_per_axis;
    const double R = spec.radius;
    std::array<double, N + 2> y{};
    std::function<double(int, double)> level = [&](int depth, double lo) -> double {
        return quadrature::integrate(
            [&](double t) {
                y[depth + 2] = t;
                if (depth + 1 == N) return shepp_det<N>(y);
                return level(depth + 1, t);
            },
            lo, R, n);
    };
    return 2.0 * quadrature::integrate(
                     [&](double x) {
                         y[0] = 0.0;
                         y[1] = x;
                         return level(0, x);
                     },
                     0.0, R, n);
}

template <int N>
inline double shepp_qmc(const QuadratureSpec& spec) {
    const double R = spec.radius;
    double fact = 1.0;
    for (int k = 2; k <= N; ++k) fact *= k;
    double sum = 0.0;
    std::array<double, N + 2> y{};
    std::array<double, N> u{};
    for (std::size_t s = 0; s < spec.total_samples; ++s) {
        const double x = R * quadrature::radical_inverse(s, quadrature::halton_bases[0]);
        for (int k = 0; k < N; ++k)
            u[k] = quadrature::radical_inverse(s, quadrature::halton_bases[k + 1]);
        std::sort(u.begin(), u.end());  // ordered simplex by sorting transform
        y[0] = 0.0;
        y[1] = x;
        for (int k = 0; k < N; ++k) y[k + 2] = x + (R - x) * u[k];
        const double jac = R * std::pow(R - x, N) / fact;
        sum += jac * shepp_det<N>(y);
    }
    return 2.0 * sum / static_cast<double>(spec.total_samples);
}

}  // namespace detail

/// P(F > n) for integer n in {1,2,3}, evaluated as the n-fold ordered
/// integral of det[phi(y_i - y_{j+1})] with y_0 = 0, y_1 = |x|.
inline double shepp_survival_integer(int n, const QuadratureSpec& spec = {}) {
    spec.validate();
    if (n < 1 || n > 3)
        throw unsupported_error("shepp_survival_integer: n must be 1, 2 or 3 (cost grows with dimension)");
    if (spec.method == quadrature::Method::quasi_random) {
        switch (n) {
            case 1: return detail::shepp_qmc<1>(spec);
            case 2: return detail::shepp_qmc<2>(spec);
            default: return detail::shepp_qmc<3>(spec);
        }
    }
    switch (n) {
        case 1: return detail::shepp_tensor<1>(spec);
        case 2: return detail::shepp_tensor<2>(spec);
        default: return detail::shepp_tensor<3>(spec);
    }
}

/// Radon-Nikodym derivative of the Slepian law on [0,t] against the
/// modified Brownian motion sqrt(2)(xi + B), evaluated on the path
/// endpoints: (2/sqrt(2-t)) exp(w0^2/4 - (w0+wt)^2/(4(2-t))).
inline double rn_derivative_slepian(double w0, double wt, double t) {
    if (!(t > 0.0 && t <= 1.0))
        throw std::domain_error("rn_derivative_slepian: t must lie in (0,1]");
    return 2.0 / std::sqrt(2.0 - t) *
           std::exp(w0 * w0 / 4.0 - (w0 + wt) * (w0 + wt) / (4.0 * (2.0 - t)));
}

/// Same change of measure for the unit window started at time t >= 0,
/// where the reference start is N(0, 2(1+t)):
/// 2 sqrt(1+t) exp(w0^2/(4(1+t)) - (w0+w1)^2/4).
/// At t=0 this reduces exactly to rn_derivative_slepian(w0, w1, 1).
inline double rn_derivative_shifted(double w0, double w1, double t) {
    if (!(t >= 0.0 && t <= 1.0))
        throw std::domain_error("rn_derivative_shifted: t must lie in [0,1]");
    return 2.0 * std::sqrt(1.0 + t) *
           std::exp(w0 * w0 / (4.0 * (1.0 + t)) - (w0 + w1) * (w0 + w1) / 4.0);
}

/// Palm-Levy tail of the gap measure over Slepian zeros; coincides with
/// the first-passage density on (0,1).
inline double palm_levy_tail(double a) { return first_passage_density(a); }

/// Ito excursion-law tail for Brownian motion, sqrt(2/(pi a)).
inline double ito_tail(double a) {
    if (!(a > 0.0)) throw std::domain_error("ito_tail: a must be positive");
    return std::sqrt(2.0 / (M_PI * a));
}

/// Kolmogorov-Smirnov CDF: law of sup |Brownian bridge|.
/// Series 1 - 2 sum (-1)^{k-1} exp(-2 k^2 x^2); for small x the dual theta
/// series keeps full precision.
inline double ks_cdf(double x) {
    if (x < 0.0) throw std::domain_error("ks_cdf: x must be nonnegative");
    if (x == 0.0) return 0.0;
    if (x < 0.2) {
        double sum = 0.0;
        for (int k = 1; k < 64; ++k) {
            const double t = (2 * k - 1) * M_PI / x;
            const double term = std::exp(-t * t / 8.0);
            sum += term;
            if (term < 1e-300) break;
        }
        return std::sqrt(2.0 * M_PI) / x * sum;
    }
    double sum = 0.0;
    double sign = 1.0;
    for (int k = 1; k < 1000; ++k) {
        const double term = std::exp(-2.0 * k * k * x * x);
        sum += sign * term;
        sign = -sign;
        if (term < 1e-12) break;
    }
    double v = 1.0 - 2.0 * sum;
    if (v < 0.0) v = 0.0;
    if (v > 1.0) v = 1.0;
    return v;
}

}  // namespace slepian_lab::densities

#endif
