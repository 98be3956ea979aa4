// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "winnbeta/config.hpp"

namespace winnbeta::cli {

namespace fs = std::filesystem;

enum ExitCode : int { kOk = 0, kFatal = 1, kUsage = 2 };

/// Names of the files a correction run leaves in its output directory.
namespace files {
inline constexpr const char* kSamples = "samples.csv";
inline constexpr const char* kInputIntensities = "input_intensities.csv";
inline constexpr const char* kCorrected = "corrected_intensities.csv";
inline constexpr const char* kLogCsv = "correction_log.csv";
inline constexpr const char* kLogJson = "correction_log.json";
inline constexpr const char* kSummary = "summary.json";
inline constexpr const char* kConfig = "config.txt";
inline constexpr const char* kCvReport = "cv_report.csv";
inline constexpr const char* kCvCdf = "cv_cdf.csv";
inline constexpr const char* kCvSummary = "cv_summary.json";
inline constexpr const char* kBenchmark = "benchmark_report.csv";
inline constexpr const char* kTraces = "traces";
inline constexpr const char* kCvPlot = "cv_curves.svg";
}  // namespace files

/// Config values given on the command line, keyed by RunConfig field name.
using Overrides = std::map<std::string, std::string>;

struct CorrectArgs {
    fs::path samples;
    fs::path intensities;
    fs::path out;
    std::optional<fs::path> config;
    Overrides overrides;
};

struct EvaluateCvArgs {
    fs::path run;
    fs::path out;
};

struct SimulateArgs {
    fs::path out;
    std::optional<std::uint64_t> seed;
    std::vector<std::string> scenarios;
    std::optional<fs::path> config;
    Overrides overrides;
};

struct ReportArgs {
    fs::path run;
    fs::path out;
};

/// Resolves default < config file < overrides and writes the run banner,
/// one line per field with its source, to `log`.
[[nodiscard]] RunConfig resolve_config(const std::optional<fs::path>& config_file,
                                       const Overrides& overrides, std::ostream& log);

int cmd_correct(const CorrectArgs& args, std::ostream& log);
int cmd_evaluate_cv(const EvaluateCvArgs& args, std::ostream& log);
int cmd_simulate(const SimulateArgs& args, std::ostream& log);
int cmd_report(const ReportArgs& args, std::ostream& log);

/// Parses argv and dispatches. Diagnostics go to `err`, help text to `out`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace winnbeta::cli
