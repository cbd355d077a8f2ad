#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "slepian_lab/densities.hpp"
#include "slepian_lab/gauss.hpp"
#include "slepian_lab/slepian.hpp"
#include "slepian_lab/stats.hpp"

using namespace slepian_lab;
namespace sp = slepian_lab::slepian;

TEST_CASE("slepian of a linear path is constant") {
    GridPath bm{0.0, 0.25, {}};
    for (int i = 0; i <= 8; ++i) bm.values.push_back(0.7 * 0.25 * i);  // B_t = 0.7 t
    const auto s = sp::slepian_from_bm(bm);
    REQUIRE(s.size() == 5);
    for (double v : s.values) REQUIRE(v == Catch::Approx(0.7).margin(1e-12));
    GridPath trimmed{0.0, 0.25, {0.0, 0.1, 0.2, 0.3, 0.4}};
    REQUIRE_THROWS_AS(sp::slepian_from_bm(trimmed), std::invalid_argument);
}

TEST_CASE("slepian covariance max(1-|dt|, 0)") {
    const double dt = 0.01;
    const std::size_t reps = 50000;
    std::vector<double> s02(reps), s09(reps), s00(reps), s20(reps);
    for (std::size_t i = 0; i < reps; ++i) {
        const auto bm = paths::sample_brownian_grid({3111, i}, 3.0, dt);
        const auto s = sp::slepian_from_bm(bm);
        s00[i] = s.values[0];
        s02[i] = s.values[20];
        s09[i] = s.values[90];
        s20[i] = s.values[200];
    }
    REQUIRE(stats::covariance(s02, s09) == Catch::Approx(0.3).margin(0.02));
    REQUIRE(stats::covariance(s00, s20) == Catch::Approx(0.0).margin(0.02));
    // 5x5 grid of pairs
    const std::vector<std::size_t> idx{0, 20, 90, 150, 200};
    std::vector<std::vector<double>> vals{s00, s02, s09, {}, s20};
    vals[3].resize(reps);
    for (std::size_t i = 0; i < reps; ++i) vals[3][i] = 0.0;  // filled below
    for (std::size_t i = 0; i < reps; ++i) {
        const auto bm = paths::sample_brownian_grid({3111, i}, 3.0, dt);
        const auto s = sp::slepian_from_bm(bm);
        vals[3][i] = s.values[150];
    }
    for (std::size_t a = 0; a < idx.size(); ++a) {
        for (std::size_t b = a; b < idx.size(); ++b) {
            const double gap = std::abs(static_cast<double>(idx[b]) - static_cast<double>(idx[a])) * dt;
            const double target = std::max(1.0 - gap, 0.0);
            REQUIRE(stats::covariance(vals[a], vals[b]) == Catch::Approx(target).margin(0.02));
        }
    }
}

TEST_CASE("bridge construction has the slepian covariance across the unit seam") {
    const double dt = 0.01;
    const std::size_t reps = 50000;
    std::vector<double> z03(reps), z11(reps), z05(reps);
    for (std::size_t i = 0; i < reps; ++i) {
        const auto z = sp::slepian_from_bridges({892, i}, 2, dt);
        z03[i] = z.values[30];
        z11[i] = z.values[110];
        z05[i] = z.values[50];
    }
    REQUIRE(stats::covariance(z03, z11) == Catch::Approx(0.2).margin(0.02));
    REQUIRE(stats::variance(z05) == Catch::Approx(1.0).margin(0.02));
    REQUIRE_THROWS_AS(sp::slepian_from_bridges({1, 0}, 0, dt), std::invalid_argument);
}

TEST_CASE("the two constructions agree in law (ks oracle)") {
    const double dt = 0.01;
    const std::size_t reps = 20000;
    std::vector<double> from_bm(reps), from_br(reps);
    for (std::size_t i = 0; i < reps; ++i) {
        const auto bm = paths::sample_brownian_grid({665, i}, 2.0, dt);
        from_bm[i] = sp::slepian_from_bm(bm).values[50];
        from_br[i] = sp::slepian_from_bridges({766, i}, 1, dt).values[50];
    }
    REQUIRE(stats::ks_two_sample(from_bm, from_br).p_value > 0.001);
}

TEST_CASE("stationarity: marginals at t=0.3 and t=2.3 agree") {
    const double dt = 0.01;
    const std::size_t reps = 20000;
    std::vector<double> a(reps), b(reps);
    for (std::size_t i = 0; i < reps; ++i) {
        a[i] = sp::slepian_from_bm(paths::sample_brownian_grid({101, i}, 3.5, dt)).values[30];
        b[i] = sp::slepian_from_bm(paths::sample_brownian_grid({202, i}, 3.5, dt)).values[230];
    }
    REQUIRE(stats::ks_two_sample(a, b).p_value > 0.001);
}

TEST_CASE("first zero: interpolation and absence") {
    GridPath p{0.0, 1.0, {1.0, 0.5, -0.5, -1.0}};
    const auto z = sp::first_zero(p);
    REQUIRE(z.has_value());
    REQUIRE(z->time == Catch::Approx(1.5));
    REQUIRE(z->left_index == 1);

    GridPath pos{0.0, 1.0, {1.0, 0.5, 0.25, 2.0}};
    REQUIRE_FALSE(sp::first_zero(pos).has_value());
}

TEST_CASE("last zero before t") {
    GridPath p{0.0, 0.5, {1.0, -1.0, 1.0}};
    const auto z = sp::last_zero_before(p, 1.0);
    REQUIRE(z.has_value());
    REQUIRE(z->time == Catch::Approx(0.75));
    const auto z2 = sp::last_zero_before(p, 0.5);
    REQUIRE(z2.has_value());
    REQUIRE(z2->time == Catch::Approx(0.25));
    GridPath neg{0.0, 0.5, {-1.0, -0.5, -2.0}};
    REQUIRE_FALSE(sp::last_zero_before(neg, 1.0).has_value());
    REQUIRE_THROWS_AS(sp::last_zero_before(p, 5.0), std::invalid_argument);
}

TEST_CASE("fraction of unit slepian paths without a zero") {
    const double dt = 1.0 / 1024.0;
    const std::size_t reps = 20000;
    std::size_t none_count = 0;
    for (std::size_t i = 0; i < reps; ++i) {
        const auto unit = sp::sample_slepian_unit({40, i}, dt);
        if (unit.crossings.empty()) ++none_count;
    }
    const double frac = static_cast<double>(none_count) / static_cast<double>(reps);
    REQUIRE(frac == Catch::Approx(0.5 - 1.0 / M_PI).margin(0.01));
}

TEST_CASE("t - G_t is distributed as min(F, t)") {
    const double dt = 1.0 / 512.0;
    const std::size_t reps = 20000;
    std::vector<double> one_minus_g(reps), min_f(reps);
    for (std::size_t i = 0; i < reps; ++i) {
        const auto u1 = sp::sample_slepian_unit({7001, i}, dt);
        one_minus_g[i] = u1.crossings.empty() ? 1.0 : 1.0 - u1.crossings.back().time;
        const auto u2 = sp::sample_slepian_unit({7002, i}, dt);
        min_f[i] = u2.crossings.empty() ? 1.0 : std::min(u2.crossings.front().time, 1.0);
    }
    REQUIRE(stats::ks_two_sample(one_minus_g, min_f).p_value > 0.001);
}

TEST_CASE("quadruple samples always satisfy 0 < f < g < 1 and sign symmetry") {
    const double dt = 1.0 / 512.0;
    const std::size_t trials = 20000;
    std::vector<double> s0_even, s0_odd_flipped;
    std::size_t accepted = 0;
    for (std::size_t i = 0; i < trials; ++i) {
        const auto s = sp::sample_quadruple({5110, i}, dt);
        if (s.status != sp::QuadrupleSample::Status::accepted) continue;
        ++accepted;
        REQUIRE(s.quadruple.f > 0.0);
        REQUIRE(s.quadruple.f < s.quadruple.g);
        REQUIRE(s.quadruple.g < 1.0);
        REQUIRE(s.quadruple.s0 != 0.0);
        REQUIRE(s.quadruple.s1 != 0.0);
        if (accepted % 2 == 0)
            s0_even.push_back(s.quadruple.s0);
        else
            s0_odd_flipped.push_back(-s.quadruple.s0);
    }
    REQUIRE(accepted > trials / 2);
    REQUIRE(stats::ks_two_sample(s0_even, s0_odd_flipped).p_value > 0.001);
}

TEST_CASE("path decomposition: middle piece is a scaled bridge, tail piece avoids zero") {
    const double dt = 1.0 / 512.0;
    const std::size_t trials = 20000;
    std::vector<double> midpoints, endpoint_scaled;
    for (std::size_t i = 0; i < trials; ++i) {
        const auto unit = sp::sample_slepian_unit({6120, i}, dt);
        if (unit.crossings.size() < 2) continue;
        const double f = unit.crossings.front().time;
        const double g = unit.crossings.back().time;
        if (!(f > 0.0 && f < g && g < 1.0)) continue;
        const double len = g - f;
        // rescaled middle piece midpoint should be N(0, 1/4)
        midpoints.push_back(unit.s.at_time(f + 0.5 * len) / std::sqrt(2.0 * len));
        endpoint_scaled.push_back(std::abs(unit.s.at_time(f)) / std::sqrt(dt));
        // final piece has no grid zero strictly after G's cell
        const std::size_t g_cell = unit.crossings.back().left_index;
        for (std::size_t j = g_cell + 2; j < unit.s.size(); ++j)
            REQUIRE(unit.s.values[j] != 0.0);
    }
    REQUIRE(midpoints.size() > 10000);
    // the piece endpoint sits at a detected zero: |S(F)| is grid-scale noise
    std::sort(endpoint_scaled.begin(), endpoint_scaled.end());
    REQUIRE(endpoint_scaled[endpoint_scaled.size() / 2] < 1.5);
    const auto rep = stats::ks_one_sample(
        midpoints, [](double x) { return gauss::Phi(2.0 * x); });  // N(0, 1/4)
    REQUIRE(rep.p_value > 0.001);
}

TEST_CASE("bridge-like window: pinned start, small endpoint, occasional cap misses") {
    const double dt = 1.0 / 256.0;
    std::size_t missed = 0;
    for (std::size_t i = 0; i < 2000; ++i) {
        const auto w = sp::sample_bridge_like_window({8113, i}, dt, 2.0);
        if (!w) {
            ++missed;
            continue;
        }
        REQUIRE(w->values.front() == 0.0);
        REQUIRE(std::abs(w->values.back()) <= 4.0 * std::sqrt(dt));
        REQUIRE(w->size() == 257);
    }
    // P(F > 2) ~ 0.036, so a horizon cap of 2 must produce some misses
    REQUIRE(missed > 20);
    REQUIRE(missed < 200);
    REQUIRE_THROWS_AS(sp::sample_bridge_like_window({1, 0}, dt, 1.0), std::invalid_argument);
}
