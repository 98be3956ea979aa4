// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "winnbeta/data_model.hpp"

namespace winnbeta {

enum class VarianceTest { Fligner, LeveneMedian, LeveneMean };

[[nodiscard]] std::string_view to_string(VarianceTest test);
/// Accepts fligner, levene-median, levene-mean (underscores also accepted).
[[nodiscard]] VarianceTest parse_variance_test(std::string_view token);

/// Effective settings for a correction run. Unset optionals mean "auto".
struct RunConfig {
    double alpha = 0.05;
    VarianceTest variance_test = VarianceTest::Fligner;
    std::optional<std::size_t> lags;  // auto: min(10, floor(n / 5)) per tested segment
    int max_df = 15;
    std::size_t min_batch_size = 20;
    MissingPolicy missing_policy = MissingPolicy::Fail;
    double outlier_sigma = 3.0;
    std::optional<std::size_t> workers;  // auto: hardware concurrency
    std::optional<std::uint64_t> seed;
    bool compat_literal_zm = false;
    /// Detrend plates only when the whole post-batch-correction series fails
    /// the white-noise test. When false every plate is gated on its own.
    bool study_wn_gate = true;
    /// Re-test the batch gates after detrending even when no plate changed.
    bool always_phase3 = true;

    /// Throws ParameterError when a field is out of bounds.
    void validate() const;

    friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

/// Flat "key = value" text, one RunConfig field per line, '#' comments.
[[nodiscard]] std::string to_text(const RunConfig& config);
/// Applies the keys present in `text` on top of `base`. Unknown keys throw.
[[nodiscard]] RunConfig parse_config(std::string_view text, RunConfig base = {});
[[nodiscard]] RunConfig load_config(const std::filesystem::path& path, RunConfig base = {});

/// Applies one key/value pair; shared by the file parser and the CLI.
void set_config_value(RunConfig& config, std::string_view key, std::string_view value);

}  // namespace winnbeta
