#ifndef SLEPIAN_LAB_STATS_HPP
#define SLEPIAN_LAB_STATS_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "slepian_lab/densities.hpp"

#include "json.hpp"

namespace slepian_lab::stats {

/// Empirical CDF over a sorted copy of the sample.
class Ecdf {
  public:
    explicit Ecdf(std::vector<double> sample) : values_(std::move(sample)) {
        if (values_.empty()) throw std::invalid_argument("Ecdf: empty sample");
        std::sort(values_.begin(), values_.end());
    }
    double operator()(double x) const {
        const auto it = std::upper_bound(values_.begin(), values_.end(), x);
        return static_cast<double>(it - values_.begin()) / static_cast<double>(values_.size());
    }
    std::size_t size() const { return values_.size(); }
    const std::vector<double>& sorted() const { return values_; }

  private:
    std::vector<double> values_;
};

struct TestReport {
    std::string test;
    double statistic = 0.0;
    double p_value = 0.0;
    std::size_t n = 0;
    double alpha = 0.001;
    bool pass = false;

    nlohmann::json to_json() const {
        return nlohmann::json{{"test", test},       {"statistic", statistic}, {"p_value", p_value},
                              {"n", n},             {"alpha", alpha},         {"pass", pass}};
    }
};

namespace detail {

// Regularized incomplete gamma Q(a,x) = Gamma(a,x)/Gamma(a); series for
// x < a+1, continued fraction otherwise (relative error ~1e-12).
inline double gamma_q(double a, double x) {
    if (x < 0.0 || a <= 0.0) throw std::domain_error("gamma_q: bad arguments");
    if (x == 0.0) return 1.0;
    const double gln = std::lgamma(a);
    if (x < a + 1.0) {
        double ap = a, del = 1.0 / a, sum = del;
        for (int i = 0; i < 500; ++i) {
            ap += 1.0;
            del *= x / ap;
            sum += del;
            if (std::abs(del) < std::abs(sum) * 1e-15) break;
        }
        return 1.0 - sum * std::exp(-x + a * std::log(x) - gln);
    }
    double b = x + 1.0 - a, c = 1e300, d = 1.0 / b, h = d;
    for (int i = 1; i < 500; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < 1e-300) d = 1e-300;
        c = b + an / c;
        if (std::abs(c) < 1e-300) c = 1e-300;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < 1e-15) break;
    }
    return std::exp(-x + a * std::log(x) - gln) * h;
}

}  // namespace detail

/// Chi-square upper tail with k degrees of freedom.
inline double chi_square_tail(double stat, double dof) {
    return detail::gamma_q(dof / 2.0, stat / 2.0);
}

/// One-sample Kolmogorov-Smirnov against a given CDF; asymptotic p-value
/// p = 1 - ks_cdf(sqrt(n) D_n). The supremum is attained at sample points,
/// checking both sides of each jump.
inline TestReport ks_one_sample(const std::vector<double>& sample,
                                const std::function<double(double)>& cdf, double alpha = 0.001) {
    if (sample.empty()) throw std::invalid_argument("ks_one_sample: empty sample");
    Ecdf ecdf{sample};
    const auto& xs = ecdf.sorted();
    const double n = static_cast<double>(xs.size());
    double d = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double f = cdf(xs[i]);
        d = std::max(d, std::abs(f - static_cast<double>(i) / n));
        d = std::max(d, std::abs(static_cast<double>(i + 1) / n - f));
    }
    TestReport r;
    r.test = "ks_one_sample";
    r.statistic = d;
    r.p_value = 1.0 - densities::ks_cdf(std::sqrt(n) * d);
    r.n = xs.size();
    r.alpha = alpha;
    r.pass = r.p_value > alpha;
    return r;
}

/// Two-sample Kolmogorov-Smirnov with effective size na nb/(na+nb).
inline TestReport ks_two_sample(std::vector<double> a, std::vector<double> b, double alpha = 0.001) {
    if (a.empty() || b.empty()) throw std::invalid_argument("ks_two_sample: empty sample");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
    double d = 0.0;
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        const double x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= x) ++i;
        while (j < b.size() && b[j] <= x) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    const double neff = na * nb / (na + nb);
    TestReport r;
    r.test = "ks_two_sample";
    r.statistic = d;
    r.p_value = 1.0 - densities::ks_cdf(std::sqrt(neff) * d);
    r.n = static_cast<std::size_t>(neff);
    r.alpha = alpha;
    r.pass = r.p_value > alpha;
    return r;
}

/// Pearson chi-square goodness of fit. Cells with expected count below
/// min_expected are pooled forward (tail pooled into the last kept group);
/// degrees of freedom = kept cells - 1.
inline TestReport chi_square_gof(const std::vector<double>& observed,
                                 const std::vector<double>& expected, double alpha = 0.001,
                                 double min_expected = 5.0) {
    if (observed.size() != expected.size() || observed.empty())
        throw std::invalid_argument("chi_square_gof: length mismatch");
    std::vector<double> obs, exp;
    double o_acc = 0.0, e_acc = 0.0;
    for (std::size_t i = 0; i < observed.size(); ++i) {
        o_acc += observed[i];
        e_acc += expected[i];
        if (e_acc >= min_expected) {
            obs.push_back(o_acc);
            exp.push_back(e_acc);
            o_acc = e_acc = 0.0;
        }
    }
    if (e_acc > 0.0 || o_acc > 0.0) {
        if (obs.empty()) {
            obs.push_back(o_acc);
            exp.push_back(e_acc);
        } else {
            obs.back() += o_acc;
            exp.back() += e_acc;
        }
    }
    double stat = 0.0;
    for (std::size_t i = 0; i < obs.size(); ++i) {
        const double diff = obs[i] - exp[i];
        stat += diff * diff / exp[i];
    }
    TestReport r;
    r.test = "chi_square_gof";
    r.statistic = stat;
    r.n = obs.size();
    r.p_value = obs.size() > 1 ? chi_square_tail(stat, static_cast<double>(obs.size() - 1)) : 1.0;
    r.alpha = alpha;
    r.pass = r.p_value > alpha;
    return r;
}

/// Total variation distance between two discrete laws on a shared support
/// (keys missing on one side count as zero).
template <typename K>
double tv_distance(const std::map<K, double>& p, const std::map<K, double>& q) {
    double s = 0.0;
    auto it = p.begin();
    auto jt = q.begin();
    while (it != p.end() || jt != q.end()) {
        if (jt == q.end() || (it != p.end() && it->first < jt->first)) {
            s += std::abs(it->second);
            ++it;
        } else if (it == p.end() || jt->first < it->first) {
            s += std::abs(jt->second);
            ++jt;
        } else {
            s += std::abs(it->second - jt->second);
            ++it;
            ++jt;
        }
    }
    return 0.5 * s;
}

inline double mean(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

inline double variance(const std::vector<double>& v) {
    const double m = mean(v);
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return s / static_cast<double>(v.size());
}

inline double covariance(const std::vector<double>& a, const std::vector<double>& b) {
    const double ma = mean(a), mb = mean(b);
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - ma) * (b[i] - mb);
    return s / static_cast<double>(a.size());
}

}  // namespace slepian_lab::stats

#endif
