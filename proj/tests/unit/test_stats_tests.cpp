// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <numeric>
#include <vector>

#include "support/oracles.hpp"
#include "winnbeta/errors.hpp"
#include "winnbeta/simulation.hpp"
#include "winnbeta/special_functions.hpp"
#include "winnbeta/stats_tests.hpp"

using namespace winnbeta;

namespace {

std::vector<double> iid(std::uint64_t seed, std::size_t n, double mean = 0.0, double sd = 1.0) {
    sim::Rng rng(seed);
    std::vector<double> v(n);
    for (auto& x : v) x = rng.normal(mean, sd);
    return v;
}

}  // namespace

TEST_CASE("chi_square_sf reference points") {
    CHECK(chi_square_sf(0.0, 5.0) == 1.0);
    // 1.959963984540054^2: the chi-square(1) tail equals the two-sided normal tail.
    const double z = 1.959963984540054;
    CHECK(chi_square_sf(z * z, 1.0) == doctest::Approx(0.05).epsilon(1e-12));
    CHECK(std::abs(chi_square_sf(z * z, 1.0) - oracle::chi2_sf(z * z, 1.0)) < 1e-10);
    CHECK(chi_square_sf(1e6, 1.0) <= 1e-12);
    CHECK_THROWS_AS((void)chi_square_sf(std::nan(""), 1.0), DomainError);
    CHECK_THROWS_AS((void)chi_square_sf(1.0, std::numeric_limits<double>::infinity()), DomainError);
}

TEST_CASE("f_sf reference points") {
    CHECK(f_sf(0.0, 3.0, 7.0) == 1.0);
    for (double d : {1.0, 2.5, 7.0, 40.0}) CHECK(f_sf(1.0, d, d) == doctest::Approx(0.5).epsilon(1e-12));
    // Quadrature of the F(1, 4) density gives 0.0213116411...
    const double oracle_p = oracle::f_sf(13.5, 1.0, 4.0);
    CHECK(oracle_p == doctest::Approx(0.0213116411).epsilon(1e-8));
    CHECK(std::abs(f_sf(13.5, 1.0, 4.0) - oracle_p) < 1e-10);
    CHECK_THROWS_AS((void)f_sf(std::nan(""), 1.0, 1.0), DomainError);
}

TEST_CASE("tail functions are monotone and clamped") {
    for (double k : {0.5, 1.0, 3.0, 10.0, 55.0}) {
        double prev = 1.0;
        for (double x = 0.0; x < 200.0; x += 0.37) {
            const double p = chi_square_sf(x, k);
            CHECK(p >= 0.0);
            CHECK(p <= prev + 1e-15);
            prev = p;
        }
    }
    for (auto [a, b] : {std::pair{1.0, 1.0}, {3.0, 20.0}, {9.0, 470.0}}) {
        double prev = 1.0;
        for (double x = 0.0; x < 60.0; x += 0.23) {
            const double p = f_sf(x, a, b);
            CHECK(p >= 0.0);
            CHECK(p <= prev + 1e-15);
            prev = p;
        }
    }
}

TEST_CASE("normal_quantile inverts the normal CDF") {
    boost::math::normal_distribution<double> n01;
    for (double p : {1e-12, 1e-6, 0.01, 0.2, 0.5, 0.77, 0.975, 1 - 1e-9}) {
        CHECK(special::normal_quantile(p) == doctest::Approx(boost::math::quantile(n01, p)).epsilon(1e-13));
    }
}

TEST_CASE("ljung_box matches the direct double-sum oracle") {
    SUBCASE("alternating series") {
        std::vector<double> x(50);
        for (std::size_t i = 0; i < x.size(); ++i) x[i] = i % 2 ? -1.0 : 1.0;
        const auto r = ljung_box(x, 5);
        const auto o = oracle::ljung_box(x, 5);
        CHECK(r.statistic == doctest::Approx(o.statistic).epsilon(1e-12));
        CHECK(r.p_value < 1e-10);
        CHECK(r.dof == 5.0);
    }
    SUBCASE("linear ramp") {
        std::vector<double> x(100);
        std::iota(x.begin(), x.end(), 1.0);
        const auto r = ljung_box(x, 5);
        CHECK(r.statistic == doctest::Approx(oracle::ljung_box(x, 5).statistic).epsilon(1e-12));
        CHECK(r.p_value < 1e-10);
    }
}

TEST_CASE("ljung_box errors") {
    CHECK_THROWS_AS((void)ljung_box(std::vector<double>(10, 3.0), 2), DegenerateError);
    CHECK_THROWS_AS((void)ljung_box(std::vector<double>{1, 2, 3}, 3), ParameterError);
    CHECK_THROWS_AS((void)ljung_box(std::vector<double>{1, 2, 3}, 0), ParameterError);
}

TEST_CASE("ljung_box calibration on iid normal input") {
    int passing = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        if (ljung_box(iid(seed, 500), 10).p_value > 0.01) ++passing;
    }
    CHECK(passing >= 95);
}

TEST_CASE("ljung_box is shift and scale invariant") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const auto x = iid(seed, 80);
        auto y = x;
        for (auto& v : y) v = -3.5 * v + 1e3;
        const auto a = ljung_box(x, 8);
        const auto b = ljung_box(y, 8);
        CHECK(b.statistic == doctest::Approx(a.statistic).epsilon(1e-12));
    }
}

TEST_CASE("default_lags") {
    CHECK(default_lags(3) == 1);
    CHECK(default_lags(20) == 4);
    CHECK(default_lags(48) == 9);
    CHECK(default_lags(96) == 10);
    CHECK(default_lags(5000) == 10);
}

TEST_CASE("anova_oneway") {
    const auto r = anova_oneway(oracle::to_sample({{1, 2, 3}, {4, 5, 6}}));
    CHECK(r.statistic == doctest::Approx(13.5).epsilon(1e-14));
    CHECK(r.dof == 1.0);
    CHECK(r.dof_denom == 4.0);
    CHECK(r.p_value == doctest::Approx(oracle::f_sf(13.5, 1, 4)).epsilon(1e-9));

    const auto same = anova_oneway(oracle::to_sample({{1, 2, 3}, {1, 2, 3}}));
    CHECK(same.statistic == 0.0);
    CHECK(same.p_value == 1.0);

    CHECK_THROWS_AS((void)anova_oneway(oracle::to_sample({{5, 5}, {5, 5}})), DegenerateError);

    const auto flat = anova_oneway(oracle::to_sample({{1, 1}, {2, 2}}));
    CHECK(flat.degenerate);
    CHECK(flat.p_value == 0.0);
}

TEST_CASE("anova_oneway is invariant under a common affine map") {
    for (std::uint64_t seed = 3; seed < 23; ++seed) {
        std::vector<std::vector<double>> g{iid(seed, 7), iid(seed + 100, 9, 0.4), iid(seed + 200, 5)};
        auto h = g;
        for (auto& grp : h)
            for (auto& v : grp) v = 12.0 * v - 7.0;
        const auto a = anova_oneway(oracle::to_sample(g));
        const auto b = anova_oneway(oracle::to_sample(h));
        CHECK(b.statistic == doctest::Approx(a.statistic).epsilon(1e-10));
    }
}

TEST_CASE("levene") {
    const auto same = levene(oracle::to_sample({{1, 2, 3}, {1, 2, 3}}), LeveneCenter::Mean);
    CHECK(same.statistic == 0.0);
    CHECK(same.p_value == 1.0);

    // Deviations {1,0,1} and {10,0,10}: SSB = 54, SSW = 606/9, F = 324/101.
    const auto r = levene(oracle::to_sample({{1, 2, 3}, {10, 20, 30}}), LeveneCenter::Mean);
    CHECK(r.statistic == doctest::Approx(324.0 / 101.0).epsilon(1e-14));
    CHECK(r.p_value == doctest::Approx(oracle::f_sf(324.0 / 101.0, 1, 4)).epsilon(1e-9));

    CHECK_THROWS_AS((void)levene(oracle::to_sample({{1, 2, 3}, {4}}), LeveneCenter::Median), GroupSizeError);
    CHECK_THROWS_AS((void)levene(oracle::to_sample({{2, 2}, {3, 3}}), LeveneCenter::Mean), DegenerateError);
}

TEST_CASE("fligner_killeen") {
    const auto same = fligner_killeen(oracle::to_sample({{1, 2, 3}, {1, 2, 3}}));
    CHECK(same.statistic == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(same.p_value == doctest::Approx(1.0).epsilon(1e-12));

    const std::vector<std::vector<double>> groups{{1, 2, 3, 4, 9}, {2, 2, 8, 1, 0, 3}, {5, 1, 7}};
    const auto r = fligner_killeen(oracle::to_sample(groups));
    const auto o = oracle::fligner(groups);
    CHECK(r.statistic == doctest::Approx(o.statistic).epsilon(1e-10));
    CHECK(r.p_value == doctest::Approx(o.p_value).epsilon(1e-9));

    CHECK_THROWS_AS((void)fligner_killeen(oracle::to_sample({{1, 2}, {1}})), GroupSizeError);
    CHECK_THROWS_AS((void)fligner_killeen(oracle::to_sample({{4, 4, 4}, {7, 7}})), DegenerateError);
}

TEST_CASE("fligner_killeen power and calibration") {
    auto spread = fligner_killeen(oracle::to_sample({iid(11, 30), iid(12, 30, 0.0, 100.0)}));
    CHECK(spread.p_value < 1e-6);

    int passing = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const auto p = fligner_killeen(oracle::to_sample(
                                           {iid(seed * 3 + 1, 50), iid(seed * 3 + 2, 50), iid(seed * 3 + 3, 50)}))
                           .p_value;
        if (p > 0.01) ++passing;
    }
    CHECK(passing >= 95);
}

TEST_CASE("variance tests ignore per-group location shifts") {
    for (std::uint64_t seed = 40; seed < 60; ++seed) {
        std::vector<std::vector<double>> g{iid(seed, 12), iid(seed + 1, 15, 0, 2), iid(seed + 2, 10)};
        auto h = g;
        double shift = 5.0;
        for (auto& grp : h) {
            for (auto& v : grp) v += shift;
            shift *= -3.0;
        }
        CHECK(fligner_killeen(oracle::to_sample(h)).statistic ==
              doctest::Approx(fligner_killeen(oracle::to_sample(g)).statistic).epsilon(1e-9));
        CHECK(levene(oracle::to_sample(h), LeveneCenter::Median).statistic ==
              doctest::Approx(levene(oracle::to_sample(g), LeveneCenter::Median).statistic).epsilon(1e-9));
        CHECK(levene(oracle::to_sample(h), LeveneCenter::Mean).statistic ==
              doctest::Approx(levene(oracle::to_sample(g), LeveneCenter::Mean).statistic).epsilon(1e-9));
    }
}

TEST_CASE("null p-value distributions are close to uniform") {
    constexpr int kTrials = 1000;
    int lb = 0, fk = 0, lev = 0, an = 0;
    for (int t = 0; t < kTrials; ++t) {
        const auto seed = sim::derive_seed(2024, static_cast<std::uint64_t>(t));
        if (ljung_box(iid(seed, 200), 10).p_value < 0.05) ++lb;
        const auto sample = oracle::to_sample({iid(seed + 1, 30), iid(seed + 2, 30), iid(seed + 3, 30)});
        if (fligner_killeen(sample).p_value < 0.05) ++fk;
        if (levene(sample, LeveneCenter::Median).p_value < 0.05) ++lev;
        if (anova_oneway(sample).p_value < 0.05) ++an;
    }
    for (int count : {lb, fk, lev, an}) {
        const double frac = static_cast<double>(count) / kTrials;
        CHECK(frac >= 0.02);
        CHECK(frac <= 0.09);
    }
}

TEST_CASE("midranks average ties") {
    const auto r = midranks(std::vector<double>{3.0, 1.0, 3.0, 2.0});
    CHECK(r == std::vector<double>{3.5, 1.0, 3.5, 2.0});
}
