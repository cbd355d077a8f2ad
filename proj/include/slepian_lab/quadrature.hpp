#ifndef SLEPIAN_LAB_QUADRATURE_HPP
#define SLEPIAN_LAB_QUADRATURE_HPP

#include <cmath>
#include <cstddef>
#include <map>
#include <mutex>
#include <stdexcept>
#include <vector>

namespace slepian_lab::quadrature {

enum class Method { tensor_grid, quasi_random };

/// Settings for the numeric integrals: grid density or QMC sample count,
/// and the truncation radius for unbounded Gaussian axes, expressed in
/// standard-normal units of the axis scale.
struct QuadratureSpec {
    Method method = Method::tensor_grid;
    int points_per_axis = 64;
    std::size_t total_samples = 1u << 18;
    double radius = 8.0;

    void validate() const {
        if (points_per_axis < 16) throw std::invalid_argument("points_per_axis must be >= 16");
        if (radius < 6.0) throw std::invalid_argument("truncation radius must be >= 6");
    }
};

struct Rule {
    std::vector<double> nodes;    // on [-1, 1]
    std::vector<double> weights;
};

/// Gauss-Legendre nodes/weights by Newton iteration, cached per order.
inline const Rule& gauss_legendre(int n) {
    static std::map<int, Rule> cache;
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    Rule r;
    r.nodes.resize(n);
    r.weights.resize(n);
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (x * p0 - p1) / (x * x - 1.0);
            const double dx = p0 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        r.nodes[i] = -x;
        r.nodes[n - 1 - i] = x;
        r.weights[i] = 2.0 / ((1.0 - x * x) * pp * pp);
        r.weights[n - 1 - i] = r.weights[i];
    }
    return cache.emplace(n, std::move(r)).first->second;
}

/// Integral of f over [a, b] with an n-point Gauss-Legendre rule.
template <typename F>
double integrate(F&& f, double a, double b, int n) {
    if (!(b > a)) return 0.0;
    const Rule& r = gauss_legendre(n);
    const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
    double sum = 0.0;
    for (int i = 0; i < n; ++i) sum += r.weights[i] * f(mid + half * r.nodes[i]);
    return half * sum;
}

/// Van der Corput radical inverse; bases 2,3,5,7,... give a Halton sequence.
inline double radical_inverse(std::size_t index, unsigned base) {
    double inv = 1.0 / base, value = 0.0, factor = inv;
    for (std::size_t i = index + 1; i > 0; i /= base) {
        value += static_cast<double>(i % base) * factor;
        factor *= inv;
    }
    return value;
}

inline constexpr unsigned halton_bases[8] = {2, 3, 5, 7, 11, 13, 17, 19};

}  // namespace slepian_lab::quadrature

#endif
