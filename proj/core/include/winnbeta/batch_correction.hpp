// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "winnbeta/config.hpp"
#include "winnbeta/data_model.hpp"
#include "winnbeta/stats_tests.hpp"

namespace winnbeta {

/// Outcome of one pass of the batch gates (variance homogeneity, then
/// equality of plate means).
struct BatchState {
    bool variance_normalized = false;
    bool residualized = false;
    std::optional<TestResult> variance_test;
    std::optional<TestResult> mean_test;
    std::map<std::string, double> plate_sds;
    std::map<std::string, double> plate_means;
    std::vector<std::string> flags;

    /// 1: untouched, 2: variance normalized only, 3: residualized only,
    /// 4: both.
    [[nodiscard]] int state_index() const noexcept {
        return 1 + (variance_normalized ? 1 : 0) + (residualized ? 2 : 0);
    }
};

struct BatchResult {
    MetaboliteSeries series;
    BatchState state;
};

/// Runs the variance-homogeneity test across plates; when p < alpha divides
/// every value by its plate's sample SD. A single plate is a flagged no-op.
/// Throws DegeneratePlateError when the test fires and a plate has zero SD.
[[nodiscard]] BatchResult variance_normalize(const MetaboliteSeries& series, double alpha,
                                             VarianceTest test = VarianceTest::Fligner);

/// One-way ANOVA with plate as a categorical factor; when p < alpha replaces
/// each value by its deviation from the plate mean.
[[nodiscard]] BatchResult residualize_by_plate(const MetaboliteSeries& series, double alpha);

/// variance_normalize followed by residualize_by_plate. Degenerate variance
/// tests or plates skip normalization with a flag instead of aborting.
[[nodiscard]] BatchResult phase1(const MetaboliteSeries& series, double alpha,
                                 VarianceTest test = VarianceTest::Fligner);

[[nodiscard]] GroupedSample group_by_plate(const MetaboliteSeries& series);

}  // namespace winnbeta
