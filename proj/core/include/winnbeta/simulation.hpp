// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "winnbeta/config.hpp"
#include "winnbeta/data_model.hpp"
#include "winnbeta/pipeline.hpp"

namespace winnbeta::sim {

/// Seeded normal generator: std::mt19937_64 (fully specified by the C++
/// standard) feeding 53-bit uniforms and the Marsaglia polar method. Unlike
/// std::normal_distribution the output does not depend on the standard
/// library implementation.
class Rng {
public:
    static constexpr std::string_view kAlgorithm = "mt19937_64+polar/v1";

    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform on (0, 1).
    double uniform();
    double normal();
    double normal(double mean, double sd) { return mean + sd * normal(); }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

/// SplitMix64 finalizer of (master_seed, stream_id): independent streams
/// for scenarios and replicates.
[[nodiscard]] std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t stream_id);

enum class DriftShape { Linear, PiecewiseLinear, Sinusoidal };

[[nodiscard]] std::string_view to_string(DriftShape shape);

/// A deterministic drift curve over within-plate positions 0..n-1.
///   Linear:          slope * p
///   PiecewiseLinear: continuous, starts at 0, slopes[k] between
///                    consecutive breakpoints
///   Sinusoidal:      amplitude * sin(2 pi cycles p / n + phase)
struct Drift {
    std::size_t plate = 0;  // 0-based plate index
    DriftShape shape = DriftShape::Linear;
    double slope = 0.0;
    std::vector<double> breakpoints;
    std::vector<double> slopes;
    double amplitude = 0.0;
    double cycles = 1.0;
    double phase = 0.0;

    [[nodiscard]] double at(double position, std::size_t wells_per_plate) const;
};

struct DriftSpec {
    std::size_t n_plates = 10;
    std::size_t wells_per_plate = 96;
    /// Empty, or one offset per plate.
    std::vector<double> batch_offsets;
    std::vector<Drift> drifts;
    double noise_sd = 1.0;
    double baseline = 0.0;
    std::uint64_t seed = 0;

    /// Throws ParameterError.
    void validate() const;
};

[[nodiscard]] std::string plate_label(std::size_t plate);

struct SimulatedMetabolite {
    DriftSpec spec;
    std::vector<double> truth;
    std::vector<double> distortion;
    std::vector<double> distorted;  // truth[i] + distortion[i]
    std::vector<std::string> plate_of;

    [[nodiscard]] MetaboliteSeries to_series(std::string name, bool use_distorted = true) const;
};

/// Distortion implied by the DriftSpec alone (no randomness).
[[nodiscard]] std::vector<double> distortion_of(const DriftSpec& spec);

[[nodiscard]] SimulatedMetabolite generate(const DriftSpec& spec);

struct ErrorStats {
    double median = 0.0;
    double q1 = 0.0;
    double q3 = 0.0;
    double iqr = 0.0;
    double whisker_low = 0.0;   // most extreme error within 1.5 IQR of the box
    double whisker_high = 0.0;
    double rmse = 0.0;
};

/// Statistics of corrected - truth. Quantiles use linear interpolation
/// between order statistics (R type 7).
[[nodiscard]] ErrorStats error_stats(std::span<const double> corrected, std::span<const double> truth);

/// RMSE after removing each plate's mean error; the primary score, since a
/// constant per-plate component is not identifiable after residualization.
[[nodiscard]] double centered_rmse(std::span<const double> corrected, std::span<const double> truth,
                                   std::span<const std::string> plate_of);

[[nodiscard]] double quantile(std::vector<double> values, double prob);

struct BenchmarkConfig {
    std::uint64_t master_seed = 42;
    std::size_t n_plates = 10;
    std::size_t wells_per_plate = 96;
    double noise_sd = 1.0;
    double amplitude = 2.0;
    double slope = 0.02;
    double offset_sd = 2.0;  // offsets ~ N(0, 4)
    std::vector<std::string> scenarios;  // empty: the whole battery
    RunConfig run;
};

/// The fixed battery, in stream-id order.
[[nodiscard]] const std::vector<std::string>& scenario_names();

/// Builds the DriftSpec of a named scenario. Random scenario parameters
/// (offsets, phases) come from the scenario's own stream of `seed`.
/// Throws LookupError for unknown names.
[[nodiscard]] DriftSpec scenario_spec(std::string_view name, std::uint64_t seed,
                                      const BenchmarkConfig& config);

struct ScenarioOutcome {
    std::string scenario;
    std::uint64_t seed = 0;
    SimulatedMetabolite sim;
    std::vector<double> corrected;
    CorrectionLog log;
    ErrorStats before;
    ErrorStats after;
    double centered_rmse_before = 0.0;
    double centered_rmse_after = 0.0;
    double spearman_before = 0.0;
    double spearman_after = 0.0;
};

[[nodiscard]] ScenarioOutcome run_scenario(std::string_view name, std::uint64_t seed,
                                           const BenchmarkConfig& config);

struct BenchmarkReport {
    std::vector<ScenarioOutcome> outcomes;
};

/// Runs each selected scenario once with seed derive_seed(master_seed, id).
[[nodiscard]] BenchmarkReport benchmark_suite(const BenchmarkConfig& config);

/// Rows of the `scenario,metric,before,after` report.
struct ReportRow {
    std::string scenario;
    std::string metric;
    double before = 0.0;
    double after = 0.0;
};

[[nodiscard]] std::vector<ReportRow> report_rows(const BenchmarkReport& report);

/// Simulated study with QC wells that share each metabolite's distortion.
struct QcStudySpec {
    std::size_t n_metabolites = 40;
    std::size_t n_plates = 10;
    std::size_t wells_per_plate = 96;
    std::size_t qc_every = 8;  // every 8th well of a plate is a QC well
    double baseline = 100.0;
    double noise_sd = 15.0;     // biological spread of experimental wells
    double qc_noise_sd = 10.0;  // technical spread of the pooled QC material
    std::uint64_t seed = 7;
};

struct QcStudy {
    StudyMatrix study;
    std::vector<DriftSpec> specs;  // one per metabolite
};

[[nodiscard]] QcStudy make_qc_study(const QcStudySpec& spec);

}  // namespace winnbeta::sim
