// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "winnbeta/config.hpp"
#include "winnbeta/data_model.hpp"
#include "winnbeta/stats_tests.hpp"

namespace winnbeta {

/// Least-squares regression-spline trend over within-plate positions 1..n.
struct SplineFit {
    int df = 1;
    std::vector<double> coefficients;
    std::vector<double> fitted;
    std::vector<double> knots;  // interior knots, in position units
};

/// Design matrix of the regression spline with `df` columns evaluated at
/// positions 1..n (row-major, n * df). df = 1, 2, 3 are the constant,
/// linear and quadratic polynomials; df >= 4 is the clamped cubic B-spline
/// basis with df - 4 interior knots at equally spaced position quantiles.
[[nodiscard]] std::vector<double> spline_design(std::size_t n, int df,
                                                std::vector<double>* knots = nullptr);

/// Requires n >= df + 2. Throws FitError when the design is rank deficient.
[[nodiscard]] SplineFit fit_spline(std::span<const double> segment, int df);

struct DfProfileEntry {
    int df = 0;
    double statistic = 0.0;
    double p_value = 0.0;
};

struct DfTuning {
    std::vector<DfProfileEntry> profile;
    int best_df = 0;
};

/// Ljung-Box p-value of the residuals for every df in the grid. The best df
/// is the smallest one attaining the maximal p-value.
[[nodiscard]] DfTuning tune_df(std::span<const double> segment, std::span<const int> df_grid,
                               std::size_t lags);

/// {1, 2, ..., min(max_df, floor(n / 4))}, restricted to df <= n - 2.
[[nodiscard]] std::vector<int> default_df_grid(std::size_t n, int max_df);

struct DetrendDecision {
    std::string plate;
    std::size_t n = 0;
    std::optional<TestResult> wn_before;
    bool detrended = false;
    std::optional<int> chosen_df;
    std::optional<TestResult> wn_after;
    std::vector<DfProfileEntry> df_profile;
    std::vector<std::string> flags;
};

struct Phase2Result {
    MetaboliteSeries series;
    /// White-noise test of the whole series entering detrending.
    std::optional<TestResult> study_wn;
    std::vector<DetrendDecision> decisions;
    std::vector<std::string> flags;

    [[nodiscard]] std::size_t plates_detrended() const;
};

/// Lag count for a segment of length n: the configured value capped at
/// n - 1, or min(10, floor(n / 5)).
[[nodiscard]] std::size_t lags_for(std::size_t n, const RunConfig& config);

/// Per-plate white-noise gating and spline detrending. A plate whose best
/// df is 1 is left unchanged and flagged no_trend_found. With
/// config.study_wn_gate the whole series is tested first and nothing is
/// detrended when it passes.
[[nodiscard]] Phase2Result phase2(const MetaboliteSeries& series, const RunConfig& config);

}  // namespace winnbeta
