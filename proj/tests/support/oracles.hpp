// SPDX-License-Identifier: Apache-2.0
//
// Independent reference implementations used only by the test suites.
// Nothing here calls into the library's numerical code paths: tail
// probabilities come from adaptive quadrature of the densities, statistics
// from direct long-double sums and O(N^2) ranking.
#pragma once

#include <boost/math/distributions/normal.hpp>
#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "winnbeta/stats_tests.hpp"

namespace oracle {

struct Result {
    double statistic = 0.0;
    double p_value = 0.0;
};

inline long double chi2_density(long double t, long double k) {
    if (t <= 0.0L) return 0.0L;
    return std::exp((k / 2 - 1) * std::log(t) - t / 2 - (k / 2) * std::log(2.0L) -
                    std::lgamma(k / 2));
}

inline long double f_density(long double t, long double d1, long double d2) {
    if (t <= 0.0L) return 0.0L;
    return std::exp(std::lgamma((d1 + d2) / 2) - std::lgamma(d1 / 2) - std::lgamma(d2 / 2) +
                    (d1 / 2) * std::log(d1 / d2) + (d1 / 2 - 1) * std::log(t) -
                    ((d1 + d2) / 2) * std::log1p(d1 * t / d2));
}

// Integrates whichever side of x is smaller so the absolute error stays
// near machine precision in both tails.
template <typename Density>
double tail_by_quadrature(Density density, long double x, long double split) {
    if (x <= 0.0L) return 1.0;
    if (x >= split) {
        boost::math::quadrature::exp_sinh<long double> upper;
        return static_cast<double>(upper.integrate(density, x, std::numeric_limits<long double>::infinity()));
    }
    boost::math::quadrature::tanh_sinh<long double> finite;
    const long double below = finite.integrate(density, 0.0L, x);
    return static_cast<double>(1.0L - below);
}

inline double chi2_sf(double x, double k) {
    const long double kk = k;
    return tail_by_quadrature([kk](long double t) { return chi2_density(t, kk); }, x,
                              std::max(kk - 2.0L, 0.5L));
}

inline double f_sf(double x, double d1, double d2) {
    const long double a = d1, b = d2;
    return tail_by_quadrature([a, b](long double t) { return f_density(t, a, b); }, x, 1.0L);
}

inline Result ljung_box(std::span<const double> x, std::size_t lags) {
    const std::size_t n = x.size();
    long double m = 0.0L;
    for (double v : x) m += v;
    m /= static_cast<long double>(n);
    long double denom = 0.0L;
    for (double v : x) denom += (v - m) * (v - m);
    long double q = 0.0L;
    for (std::size_t k = 1; k <= lags; ++k) {
        long double num = 0.0L;
        for (std::size_t t = k; t < n; ++t) num += (x[t] - m) * (x[t - k] - m);
        const long double r = num / denom;
        q += r * r / static_cast<long double>(n - k);
    }
    q *= static_cast<long double>(n) * static_cast<long double>(n + 2);
    return {static_cast<double>(q), chi2_sf(static_cast<double>(q), static_cast<double>(lags))};
}

inline Result anova(const std::vector<std::vector<double>>& groups) {
    long double grand = 0.0L;
    std::size_t total = 0;
    for (const auto& g : groups) {
        for (double v : g) grand += v;
        total += g.size();
    }
    grand /= static_cast<long double>(total);
    long double between = 0.0L, within = 0.0L;
    for (const auto& g : groups) {
        long double gm = 0.0L;
        for (double v : g) gm += v;
        gm /= static_cast<long double>(g.size());
        between += static_cast<long double>(g.size()) * (gm - grand) * (gm - grand);
        for (double v : g) within += (v - gm) * (v - gm);
    }
    const double d1 = static_cast<double>(groups.size() - 1);
    const double d2 = static_cast<double>(total - groups.size());
    const auto f = static_cast<double>((between / d1) / (within / d2));
    return {f, f_sf(f, d1, d2)};
}

inline double median_of(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const auto n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

inline Result levene(const std::vector<std::vector<double>>& groups, bool use_median) {
    std::vector<std::vector<double>> dev;
    for (const auto& g : groups) {
        double c = 0.0;
        if (use_median) {
            c = median_of(g);
        } else {
            for (double v : g) c += v;
            c /= static_cast<double>(g.size());
        }
        std::vector<double> d;
        for (double v : g) d.push_back(std::abs(v - c));
        dev.push_back(std::move(d));
    }
    return anova(dev);
}

// R's fligner.test formula: (sum_j S_j^2 / n_j - N * mean(a)^2) / var(a).
// Medians and deviations are formed in long double, where the midpoint of
// two doubles and both distances to it are exact, so tied deviations tie.
inline Result fligner(const std::vector<std::vector<double>>& groups) {
    std::vector<long double> a;
    std::vector<std::size_t> gid;
    for (std::size_t j = 0; j < groups.size(); ++j) {
        std::vector<long double> sorted(groups[j].begin(), groups[j].end());
        std::sort(sorted.begin(), sorted.end());
        const auto m = sorted.size();
        const long double med = m % 2 ? sorted[m / 2] : (sorted[m / 2 - 1] + sorted[m / 2]) / 2;
        for (double v : groups[j]) {
            a.push_back(std::abs(static_cast<long double>(v) - med));
            gid.push_back(j);
        }
    }
    const std::size_t n = a.size();
    boost::math::normal_distribution<long double> normal;
    std::vector<long double> score(n);
    for (std::size_t i = 0; i < n; ++i) {
        long double less = 0, equal = 0;
        for (std::size_t j = 0; j < n; ++j) {
            if (a[j] < a[i]) ++less;
            else if (a[j] == a[i]) ++equal;
        }
        const long double rank = less + (equal + 1) / 2;
        score[i] = boost::math::quantile(normal, (1 + rank / (n + 1)) / 2);
    }
    long double mean = 0;
    for (auto s : score) mean += s;
    mean /= n;
    long double var = 0;
    for (auto s : score) var += (s - mean) * (s - mean);
    var /= (n - 1);
    std::vector<long double> sums(groups.size(), 0.0L);
    for (std::size_t i = 0; i < n; ++i) sums[gid[i]] += score[i];
    long double stat = 0;
    for (std::size_t j = 0; j < groups.size(); ++j) stat += sums[j] * sums[j] / groups[j].size();
    stat = (stat - n * mean * mean) / var;
    const double s = static_cast<double>(stat);
    return {s, chi2_sf(s, static_cast<double>(groups.size() - 1))};
}

inline winnbeta::GroupedSample to_sample(const std::vector<std::vector<double>>& groups) {
    winnbeta::GroupedSample s;
    for (std::size_t j = 0; j < groups.size(); ++j) s.push_back({"g" + std::to_string(j), groups[j]});
    return s;
}

}  // namespace oracle
