#ifndef SLEPIAN_LAB_EXPERIMENTS_HPP
#define SLEPIAN_LAB_EXPERIMENTS_HPP

#include <cmath>
#include <cstddef>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "slepian_lab/densities.hpp"
#include "slepian_lab/io.hpp"
#include "slepian_lab/localtime.hpp"
#include "slepian_lab/parallel.hpp"
#include "slepian_lab/rwbridge.hpp"
#include "slepian_lab/slepian.hpp"
#include "slepian_lab/stats.hpp"

#include "json.hpp"

namespace slepian_lab::experiments {

using nlohmann::json;

// ---------------------------------------------------------------------------
// slepian-first-passage: empirical law of the first Slepian zero on [0,1]
// ---------------------------------------------------------------------------

struct FirstPassageResult {
    std::size_t replicates = 0;
    double p_f_le_1 = 0.0;
    double p_f_le_1_target = 0.5 + 1.0 / M_PI;
    std::vector<double> hist_observed;  // 32 bins on (0,1), accepted F's
    std::vector<double> hist_expected;
    stats::TestReport chi2;
    bool pass = false;
};

inline FirstPassageResult run_first_passage(SeedSpec seed, double dt, std::size_t replicates,
                                            unsigned threads = 0, std::size_t bins = 32) {
    std::vector<double> f_values(replicates, -1.0);  // -1 marks no zero
    parallel::for_each_index(
        replicates,
        [&](std::size_t i) {
            auto unit = slepian::sample_slepian_unit({seed.master_seed, seed.stream_index + i}, dt);
            if (!unit.crossings.empty()) f_values[i] = unit.crossings.front().time;
        },
        threads);

    FirstPassageResult res;
    res.replicates = replicates;
    std::size_t hits = 0;
    res.hist_observed.assign(bins, 0.0);
    for (double f : f_values) {
        if (f < 0.0) continue;
        ++hits;
        auto b = static_cast<std::size_t>(f * static_cast<double>(bins));
        if (b >= bins) b = bins - 1;
        res.hist_observed[b] += 1.0;
    }
    res.p_f_le_1 = static_cast<double>(hits) / static_cast<double>(replicates);

    res.hist_expected.resize(bins);
    double total = 0.0;
    for (std::size_t b = 0; b < bins; ++b) {
        const double lo = static_cast<double>(b) / bins, hi = static_cast<double>(b + 1) / bins;
        res.hist_expected[b] =
            quadrature::integrate([](double a) { return densities::first_passage_density(a); },
                                  std::max(lo, 1e-12), std::min(hi, 1.0 - 1e-12), 64);
        total += res.hist_expected[b];
    }
    for (auto& e : res.hist_expected) e *= static_cast<double>(hits) / total;

    res.chi2 = stats::chi_square_gof(res.hist_observed, res.hist_expected);
    res.pass = res.chi2.pass && std::abs(res.p_f_le_1 - res.p_f_le_1_target) <= 0.01;
    return res;
}

inline void write_csv(const FirstPassageResult& r, std::ostream& os) {
    os << "bin_lo,bin_hi,observed,expected\n";
    const std::size_t bins = r.hist_observed.size();
    for (std::size_t b = 0; b < bins; ++b)
        os << io::g9(static_cast<double>(b) / bins) << ',' << io::g9(static_cast<double>(b + 1) / bins)
           << ',' << io::g9(r.hist_observed[b]) << ',' << io::g9(r.hist_expected[b]) << '\n';
}

inline json to_json(const FirstPassageResult& r) {
    return json{{"schema", 1},
                {"experiment", "slepian-first-passage"},
                {"replicates", r.replicates},
                {"p_f_le_1", r.p_f_le_1},
                {"target", r.p_f_le_1_target},
                {"chi_square", r.chi2.to_json()},
                {"pass", r.pass}};
}

// ---------------------------------------------------------------------------
// quadruple-gof: accepted (S0,S1,F,G) draws against the closed-form law
// ---------------------------------------------------------------------------

struct QuadrupleGofResult {
    std::size_t accepted = 0;
    std::size_t trials = 0;
    std::size_t single_crossing = 0;
    double acceptance_rate = 0.0;
    double mass_numeric = 0.0;  // 4-d quadrature of the quadruple density
    stats::TestReport chi2;     // 10x10 (f,g) histogram
    bool symmetry_ok = false;   // sign and time-reversal identities, exact
    bool pass = false;
    std::vector<slepian::Quadruple> sample;  // accepted draws, replicate order
};

inline bool quadruple_symmetry_checks() {
    // kernel identities, checked at dyadic (a,b) so that the reflected
    // arguments 1-b and 1-a are exact and the equalities hold bit for bit
    const double pts[4][4] = {{0.7, -1.1, 0.25, 0.625}, {1.3, 0.4, 0.125, 0.75},
                              {-0.2, -0.8, 0.375, 0.5}, {2.0, 1.0, 0.25, 0.75}};
    for (const auto& p : pts) {
        const double x = p[0], y = p[1], a = p[2], b = p[3];
        if (densities::quadruple_density(x, y, a, b) != densities::quadruple_density(-x, -y, a, b))
            return false;
        if (densities::quadruple_density(x, y, a, b) !=
            densities::quadruple_density(y, x, 1.0 - b, 1.0 - a))
            return false;
    }
    return true;
}

inline QuadrupleGofResult run_quadruple_gof(SeedSpec seed, double dt, std::size_t accepted_target,
                                            unsigned threads = 0) {
    QuadrupleGofResult res;
    res.sample.reserve(accepted_target);
    std::size_t base = 0;
    while (res.sample.size() < accepted_target) {
        const std::size_t batch =
            std::max<std::size_t>(1024, (accepted_target - res.sample.size()) * 5 / 4 + 64);
        std::vector<slepian::QuadrupleSample> out(batch);
        parallel::for_each_index(
            batch,
            [&](std::size_t i) {
                out[i] = slepian::sample_quadruple({seed.master_seed, seed.stream_index + base + i}, dt);
            },
            threads);
        for (std::size_t i = 0; i < batch && res.sample.size() < accepted_target; ++i) {
            ++res.trials;
            if (out[i].status == slepian::QuadrupleSample::Status::accepted)
                res.sample.push_back(out[i].quadruple);
            else if (out[i].status == slepian::QuadrupleSample::Status::single_crossing)
                ++res.single_crossing;
        }
        base += batch;
    }
    res.accepted = res.sample.size();
    res.acceptance_rate = static_cast<double>(res.accepted) / static_cast<double>(res.trials);

    // observed 10x10 (f,g) histogram over the unit square
    constexpr std::size_t nb = 10;
    std::vector<double> observed(nb * nb, 0.0);
    for (const auto& q : res.sample) {
        auto bi = std::min<std::size_t>(static_cast<std::size_t>(q.f * nb), nb - 1);
        auto bj = std::min<std::size_t>(static_cast<std::size_t>(q.g * nb), nb - 1);
        observed[bi * nb + bj] += 1.0;
    }
    // expected cell masses of the numerically marginalized law, a < b only
    quadrature::QuadratureSpec inner;
    inner.points_per_axis = 32;
    std::vector<double> expected(nb * nb, 0.0);
    double total = 0.0;
    for (std::size_t bi = 0; bi < nb; ++bi) {
        for (std::size_t bj = bi; bj < nb; ++bj) {
            const double alo = static_cast<double>(bi) / nb, ahi = static_cast<double>(bi + 1) / nb;
            const double blo = static_cast<double>(bj) / nb, bhi = static_cast<double>(bj + 1) / nb;
            const double v = quadrature::integrate(
                [&](double b) {
                    const double top = std::min(ahi, b);
                    if (top <= alo) return 0.0;
                    // a = top sin^2(theta) over the admissible range kills both
                    // the a->0 and a->b inverse-sqrt edges
                    const double th_lo = std::asin(std::sqrt(std::max(0.0, alo / top)));
                    return quadrature::integrate(
                        [&](double th) {
                            const double s = std::sin(th), c = std::cos(th);
                            const double aa = top * s * s;
                            if (!(aa > 0.0 && aa < b)) return 0.0;
                            return densities::fg_marginal_numeric(aa, b, inner) * 2.0 * top * s * c;
                        },
                        th_lo, M_PI / 2.0, 24);
                },
                std::max(blo, 1e-10), std::min(bhi, 1.0 - 1e-10), 24);
            expected[bi * nb + bj] = v;
            total += v;
        }
    }
    res.mass_numeric = total;
    for (auto& e : expected) e *= static_cast<double>(res.accepted) / total;

    res.chi2 = stats::chi_square_gof(observed, expected);
    res.symmetry_ok = quadruple_symmetry_checks();
    res.pass = res.chi2.pass && res.symmetry_ok;
    return res;
}

inline void write_csv(const QuadrupleGofResult& r, std::ostream& os) {
    os << "s0,s1,f,g\n";
    for (const auto& q : r.sample)
        os << io::g9(q.s0) << ',' << io::g9(q.s1) << ',' << io::g9(q.f) << ',' << io::g9(q.g) << '\n';
}

inline json to_json(const QuadrupleGofResult& r) {
    return json{{"schema", 1},
                {"experiment", "quadruple-gof"},
                {"accepted", r.accepted},
                {"trials", r.trials},
                {"single_crossing_rejects", r.single_crossing},
                {"acceptance_rate", r.acceptance_rate},
                {"mass_numeric", r.mass_numeric},
                {"chi_square", r.chi2.to_json()},
                {"symmetry_exact", r.symmetry_ok},
                {"pass", r.pass}};
}

// ---------------------------------------------------------------------------
// rw-exact / rw-max-cdf: discrete first level bridge
// ---------------------------------------------------------------------------

struct RwExactResult {
    rwbridge::BridgeLaw law;
    bool sums_to_one = false;
    bool symmetric = false;
    rwbridge::rational ratio;
    bool pass = false;
};

inline RwExactResult run_rw_exact(int n) {
    RwExactResult res;
    res.law = rwbridge::exact_bridge_law(n);
    res.sums_to_one = res.law.total() == 1;
    res.symmetric = true;
    const std::uint32_t mask = (1u << n) - 1u;
    for (const auto& [state, p] : res.law.probabilities)
        if (p != res.law.prob_of(~state & mask)) res.symmetric = false;
    res.ratio = rwbridge::max_min_ratio(res.law);
    res.pass = res.sums_to_one && res.symmetric && (n == 2 ? res.ratio == 1 : res.ratio > 1);
    return res;
}

struct RwMaxCdfRow {
    int n = 0;
    double x = 0.0;
    rwbridge::CdfEstimate est;
    double ks_value = 0.0;
    double gap = 0.0;  // ks_cdf(x) - estimate
};

inline RwMaxCdfRow run_rw_max_cdf(SeedSpec seed, int n, double x, std::size_t replicates,
                                  unsigned threads = 0) {
    RwMaxCdfRow row;
    row.n = n;
    row.x = x;
    const double threshold = x * std::sqrt(static_cast<double>(n)) + 1e-9;
    std::vector<std::uint8_t> hit(replicates, 0);
    parallel::for_each_index(
        replicates,
        [&](std::size_t i) {
            RandomStream rng({seed.master_seed, seed.stream_index + i});
            hit[i] = rwbridge::simulate_first_level_bridge(rng, n).max_abs() <= threshold ? 1 : 0;
        },
        threads);
    std::size_t hits = 0;
    for (auto h : hit) hits += h;
    row.est.replicates = replicates;
    row.est.estimate = static_cast<double>(hits) / static_cast<double>(replicates);
    row.est.std_error =
        std::sqrt(row.est.estimate * (1.0 - row.est.estimate) / static_cast<double>(replicates));
    row.ks_value = densities::ks_cdf(x);
    row.gap = row.ks_value - row.est.estimate;
    return row;
}

// ---------------------------------------------------------------------------
// embed: allocation-time embedding of the bridge into Brownian motion
// ---------------------------------------------------------------------------

/// Per-replicate embedding summary: the window subsampled at 17 equispaced
/// u values (u = k/16), enough for the marginal and covariance checks
/// without holding 1/dt values per replicate.
struct EmbedRow {
    bool found = false;
    bool degenerate = false;
    double t_alloc = 0.0;
    double endpoint = 0.0;
    std::array<double, 17> w{};
};

struct EmbedRunResult {
    std::size_t replicates = 0;
    std::size_t found = 0;
    std::size_t degenerate = 0;
    double found_fraction = 0.0;
    double epsilon = 0.0;
    std::vector<EmbedRow> rows;  // replicate order
    bool windows_ok = false;     // start 0 exactly, |endpoint| <= eps + 4 sqrt(dt)
    bool pass = false;
};

inline EmbedRunResult run_embed(SeedSpec seed, double dt, double epsilon, std::size_t replicates,
                                double horizon_cap = 64.0, unsigned threads = 0,
                                localtime::Normalization norm = localtime::Normalization::exact_band) {
    EmbedRunResult res;
    res.replicates = replicates;
    res.epsilon = epsilon;
    res.rows.resize(replicates);
    parallel::for_each_index(
        replicates,
        [&](std::size_t i) {
            const auto r = localtime::embed_bridge({seed.master_seed, seed.stream_index + i}, dt,
                                                   epsilon, horizon_cap, norm);
            if (!r) return;
            EmbedRow& row = res.rows[i];
            row.found = true;
            row.degenerate = r->degenerate;
            row.t_alloc = r->t_alloc;
            row.endpoint = r->endpoint;
            const std::size_t n = r->window.size() - 1;
            for (std::size_t k = 0; k <= 16; ++k) row.w[k] = r->window.values[n * k / 16];
        },
        threads);
    res.windows_ok = true;
    const double slack = epsilon + 4.0 * std::sqrt(dt);
    for (const auto& row : res.rows) {
        if (!row.found) continue;
        ++res.found;
        if (row.degenerate) ++res.degenerate;
        if (row.w[0] != 0.0 || std::abs(row.endpoint) > slack) res.windows_ok = false;
    }
    res.found_fraction = static_cast<double>(res.found) / static_cast<double>(replicates);
    res.pass = res.windows_ok;
    return res;
}

/// CSV: one row per found embedding, window subsampled at 17 equispaced u.
inline void write_csv(const EmbedRunResult& r, std::ostream& os) {
    os << "replicate,t_alloc,endpoint,degenerate";
    for (int k = 0; k <= 16; ++k) os << ",w" << k;
    os << '\n';
    for (std::size_t i = 0; i < r.rows.size(); ++i) {
        const auto& e = r.rows[i];
        if (!e.found) continue;
        os << i << ',' << io::g9(e.t_alloc) << ',' << io::g9(e.endpoint) << ','
           << (e.degenerate ? 1 : 0);
        for (int k = 0; k <= 16; ++k) os << ',' << io::g9(e.w[k]);
        os << '\n';
    }
}

inline json to_json(const EmbedRunResult& r) {
    return json{{"schema", 1},
                {"experiment", "embed"},
                {"replicates", r.replicates},
                {"found", r.found},
                {"found_fraction", r.found_fraction},
                {"degenerate", r.degenerate},
                {"epsilon", r.epsilon},
                {"windows_ok", r.windows_ok},
                {"pass", r.pass}};
}

// ---------------------------------------------------------------------------
// shepp: survival integrals
// ---------------------------------------------------------------------------

struct SheppResult {
    int t = 0;
    double value = 0.0;
    std::optional<double> target;
    bool pass = false;
};

inline SheppResult run_shepp(int t, const quadrature::QuadratureSpec& spec = {}) {
    SheppResult res;
    res.t = t;
    res.value = densities::shepp_survival_integer(t, spec);
    if (t == 1) {
        res.target = 0.5 - 1.0 / M_PI;
        res.pass = std::abs(res.value - *res.target) <= 1e-4;
    } else {
        res.pass = res.value > 0.0 && res.value < 1.0;
    }
    return res;
}

inline json to_json(const SheppResult& r) {
    json j{{"schema", 1}, {"experiment", "shepp"}, {"t", r.t}, {"value", r.value}, {"pass", r.pass}};
    if (r.target) j["target"] = *r.target;
    else j["target"] = nullptr;
    return j;
}

}  // namespace slepian_lab::experiments

#endif
