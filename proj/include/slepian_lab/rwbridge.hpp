#ifndef SLEPIAN_LAB_RWBRIDGE_HPP
#define SLEPIAN_LAB_RWBRIDGE_HPP

#include <bit>
#include <cmath>
#include <cstdint>
#include <map>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/multiprecision/gmp.hpp>

#include "slepian_lab/errors.hpp"
#include "slepian_lab/rng.hpp"

namespace slepian_lab::rwbridge {

using rational = boost::multiprecision::mpq_rational;

/// Finite +/-1 increment sequence of a simple random walk.
struct LatticePath {
    std::vector<std::int8_t> increments;

    std::vector<int> cumulative() const {
        std::vector<int> out(increments.size() + 1, 0);
        for (std::size_t i = 0; i < increments.size(); ++i)
            out[i + 1] = out[i] + increments[i];
        return out;
    }
    int max_abs() const {
        int cum = 0, m = 0;
        for (auto inc : increments) {
            cum += inc;
            m = std::max(m, std::abs(cum));
        }
        return m;
    }
};

/// Window state encoding: bit n-1-k holds step k, bit set = +1.
inline std::string window_string(std::uint32_t w, int n) {
    std::string s(static_cast<std::size_t>(n), '-');
    for (int k = 0; k < n; ++k)
        if ((w >> (n - 1 - k)) & 1u) s[static_cast<std::size_t>(k)] = '+';
    return s;
}

/// Exact absorption law of the first level bridge of even length n: the
/// distribution of the increment window at the first time the sliding
/// window of the walk sums to zero.
struct BridgeLaw {
    int n = 0;
    std::vector<std::pair<std::uint32_t, rational>> probabilities;  // sorted by state

    const rational& prob_of(std::uint32_t w) const {
        for (const auto& [state, p] : probabilities)
            if (state == w) return p;
        throw std::out_of_range("BridgeLaw: state not in support");
    }
    rational total() const {
        rational s = 0;
        for (const auto& [state, p] : probabilities) s += p;
        return s;
    }
    std::map<std::string, double> float_view() const {
        std::map<std::string, double> out;
        for (const auto& [state, p] : probabilities)
            out[window_string(state, n)] = p.convert_to<double>();
        return out;
    }
};

/// Max/min probability over the support, exact.
inline rational max_min_ratio(const BridgeLaw& law) {
    rational mx = law.probabilities.front().second;
    rational mn = mx;
    for (const auto& [state, p] : law.probabilities) {
        if (p > mx) mx = p;
        if (p < mn) mn = p;
    }
    return mx / mn;
}

/// Absorbing-chain solve over increment windows: 2^n states, a window
/// absorbs when its sum is zero, transitions shift and append a fair step.
/// Expected transient visit counts come from one exact rational solve of
/// (I - Q^T) N = mu over the up-down symmetry quotient (windows paired with
/// their sign flip), which halves the dimension.
inline BridgeLaw exact_bridge_law(int n) {
    if (n < 2 || n % 2 != 0) throw std::invalid_argument("exact_bridge_law: n must be even and >= 2");
    if (n > 12)
        throw unsupported_error(
            "exact_bridge_law: state-space cap is n = 12 in this build (the exact rational solve "
            "needs >2 GB and tens of minutes beyond that)");

    const std::uint32_t mask = (n == 32) ? 0xFFFFFFFFu : ((1u << n) - 1u);
    const std::uint32_t count = 1u << n;
    auto absorbing = [&](std::uint32_t w) { return 2 * std::popcount(w) == n; };
    auto rep = [&](std::uint32_t w) { return std::min(w, ~w & mask); };

    std::vector<std::int32_t> class_index(count, -1);
    std::vector<std::uint32_t> transient_reps;
    for (std::uint32_t w = 0; w < count; ++w) {
        if (absorbing(w) || rep(w) != w) continue;
        class_index[w] = static_cast<std::int32_t>(transient_reps.size());
        transient_reps.push_back(w);
    }
    for (std::uint32_t w = 0; w < count; ++w)
        if (!absorbing(w) && rep(w) != w) class_index[w] = class_index[rep(w)];
    const std::size_t m = transient_reps.size();

    // A = I - Q^T over classes, dense rationals; rhs = initial class mass.
    std::vector<std::vector<rational>> a(m, std::vector<rational>(m, rational(0)));
    std::vector<rational> rhs(m);
    const rational half(1, 2);
    const rational cell_mass = rational(2) / rational(std::uint64_t(1) << n);
    for (std::size_t i = 0; i < m; ++i) {
        a[i][i] = 1;
        rhs[i] = cell_mass;
    }
    for (std::size_t i = 0; i < m; ++i) {
        const std::uint32_t w = transient_reps[i];
        for (std::uint32_t bit = 0; bit < 2; ++bit) {
            const std::uint32_t w2 = ((w << 1) | bit) & mask;
            if (!absorbing(w2)) a[static_cast<std::size_t>(class_index[w2])][i] -= half;
        }
    }

    // forward elimination with sparsity-aware skips, then back substitution
    for (std::size_t c = 0; c < m; ++c) {
        std::size_t piv = c;
        while (piv < m && a[piv][c] == 0) ++piv;
        if (piv == m) throw std::logic_error("exact_bridge_law: singular system");
        if (piv != c) {
            std::swap(a[piv], a[c]);
            std::swap(rhs[piv], rhs[c]);
        }
        for (std::size_t r = c + 1; r < m; ++r) {
            if (a[r][c] == 0) continue;
            const rational f = a[r][c] / a[c][c];
            a[r][c] = 0;
            for (std::size_t k = c + 1; k < m; ++k) {
                if (a[c][k] != 0) a[r][k] -= f * a[c][k];
            }
            rhs[r] -= f * rhs[c];
        }
    }
    std::vector<rational> visits(m);
    for (std::size_t r = m; r-- > 0;) {
        rational s = rhs[r];
        for (std::size_t k = r + 1; k < m; ++k)
            if (a[r][k] != 0) s -= a[r][k] * visits[k];
        visits[r] = s / a[r][r];
    }

    // absorption mass per zero-sum window: initial hit plus half the visit
    // count of each transient predecessor (per-state visits are half the
    // class visits by symmetry)
    BridgeLaw law;
    law.n = n;
    const rational quarter(1, 4);
    const rational init = rational(1) / rational(std::uint64_t(1) << n);
    for (std::uint32_t j = 0; j < count; ++j) {
        if (!absorbing(j)) continue;
        rational p = init;
        for (std::uint32_t hi = 0; hi < 2; ++hi) {
            const std::uint32_t pred = (j >> 1) | (hi << (n - 1));
            if (!absorbing(pred)) p += quarter * visits[static_cast<std::size_t>(class_index[pred])];
        }
        law.probabilities.emplace_back(j, p);
    }
    return law;
}

/// Run the walk until the window of the last n steps sums to zero and
/// return that window. O(1) memory beyond the window ring; the initial
/// window counts as time zero.
inline LatticePath simulate_first_level_bridge(RandomStream& rng, int n) {
    if (n < 2 || n % 2 != 0)
        throw std::invalid_argument("simulate_first_level_bridge: n must be even and >= 2");
    std::vector<std::int8_t> ring(static_cast<std::size_t>(n));
    int sum = 0;
    for (auto& v : ring) {
        v = static_cast<std::int8_t>(rng.rademacher());
        sum += v;
    }
    std::size_t pos = 0;
    constexpr std::uint64_t cap = 1000000000ULL;
    for (std::uint64_t k = 0; sum != 0; ++k) {
        if (k >= cap)
            throw std::runtime_error("simulate_first_level_bridge: iteration cap reached");
        const auto fresh = static_cast<std::int8_t>(rng.rademacher());
        sum += fresh - ring[pos];
        ring[pos] = fresh;
        pos = (pos + 1) % static_cast<std::size_t>(n);
    }
    LatticePath out;
    out.increments.resize(static_cast<std::size_t>(n));
    for (std::size_t i = 0; i < ring.size(); ++i)
        out.increments[i] = ring[(pos + i) % ring.size()];
    return out;
}

inline LatticePath simulate_first_level_bridge(SeedSpec seed, int n) {
    RandomStream rng(seed);
    return simulate_first_level_bridge(rng, n);
}

struct CdfEstimate {
    double estimate = 0.0;
    double std_error = 0.0;
    std::size_t replicates = 0;
};

/// Monte Carlo CDF of the scaled maximum max_k |bridge_k| / sqrt(n) at x,
/// with binomial standard error. Replicate r uses stream index
/// seed.stream_index + r, so the estimate does not depend on threading.
inline CdfEstimate scaled_max_cdf_at(SeedSpec seed, int n, double x, std::size_t replicates) {
    if (replicates < 1000) throw std::invalid_argument("scaled_max_cdf_at: need at least 1e3 replicates");
    const double threshold = x * std::sqrt(static_cast<double>(n)) + 1e-9;
    std::size_t hits = 0;
    for (std::size_t r = 0; r < replicates; ++r) {
        RandomStream rng({seed.master_seed, seed.stream_index + r});
        const LatticePath path = simulate_first_level_bridge(rng, n);
        if (path.max_abs() <= threshold) ++hits;
    }
    CdfEstimate est;
    est.replicates = replicates;
    est.estimate = static_cast<double>(hits) / static_cast<double>(replicates);
    est.std_error = std::sqrt(est.estimate * (1.0 - est.estimate) / static_cast<double>(replicates));
    return est;
}

/// CSV rows: path, prob_num, prob_den, prob_float.
inline void write_csv(const BridgeLaw& law, std::ostream& os) {
    os << "path,prob_num,prob_den,prob_float\n";
    char buf[40];
    for (const auto& [state, p] : law.probabilities) {
        std::snprintf(buf, sizeof buf, "%.9g", p.convert_to<double>());
        os << window_string(state, law.n) << ',' << numerator(p).str() << ','
           << denominator(p).str() << ',' << buf << '\n';
    }
}

}  // namespace slepian_lab::rwbridge

#endif
