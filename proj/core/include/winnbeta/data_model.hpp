// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <filesystem>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace winnbeta {

enum class SampleType { Experimental, Qc };

/// Which wells extract_series keeps.
enum class SampleSelection { Experimental, Qc, All };

[[nodiscard]] std::string_view to_string(SampleType type);
/// Case-insensitive "experimental" / "qc"; throws IngestionError otherwise.
[[nodiscard]] SampleType parse_sample_type(std::string_view token);

struct Well {
    int run_order = 0;  // 1-based injection position
    std::string sample_id;
    std::string plate;  // opaque label, never interpreted numerically
    SampleType sample_type = SampleType::Experimental;

    friend bool operator==(const Well&, const Well&) = default;
};

using Cell = std::optional<double>;

/// Run-order indexed intensity grid. Rows are wells sorted by run order,
/// columns follow metabolite_names.
struct StudyMatrix {
    std::vector<Well> wells;
    std::vector<std::string> metabolite_names;
    std::vector<std::vector<Cell>> intensities;  // [well][metabolite]

    [[nodiscard]] std::size_t n_wells() const noexcept { return wells.size(); }
    [[nodiscard]] std::size_t n_metabolites() const noexcept { return metabolite_names.size(); }
    /// Throws LookupError for unknown names.
    [[nodiscard]] std::size_t column_index(std::string_view name) const;
    [[nodiscard]] std::size_t count(SampleType type) const;

    friend bool operator==(const StudyMatrix&, const StudyMatrix&) = default;
};

/// One metabolite restricted to a subset of wells. A NaN value marks a
/// missing cell; preprocess() removes them before the series enters the
/// correction pipeline.
struct MetaboliteSeries {
    std::string name;
    std::vector<double> values;
    std::vector<std::string> plate_of;
    std::vector<int> run_order;

    [[nodiscard]] std::size_t size() const noexcept { return values.size(); }
    [[nodiscard]] bool has_missing() const;
    /// Throws ParameterError when the parallel arrays disagree or are empty.
    void validate() const;
};

/// Indices of one plate inside a series, in series order.
struct PlateGroup {
    std::string plate;
    std::vector<std::size_t> indices;
};

/// Plates in order of first appearance.
[[nodiscard]] std::vector<PlateGroup> partition_by_plate(const MetaboliteSeries& series);

[[nodiscard]] inline constexpr double missing_value() noexcept {
    return std::numeric_limits<double>::quiet_NaN();
}

[[nodiscard]] StudyMatrix load_study(const std::filesystem::path& samples_path,
                                     const std::filesystem::path& intensities_path);

/// Validates the invariants load_study guarantees (sorted, contiguous
/// run orders, rectangular grid). Throws IngestionError.
void validate_study(const StudyMatrix& study);

void write_intensities(const StudyMatrix& study, const std::filesystem::path& path);
void write_samples(const StudyMatrix& study, const std::filesystem::path& path);

[[nodiscard]] MetaboliteSeries extract_series(const StudyMatrix& study, std::string_view name,
                                              SampleSelection which);

enum class MissingPolicy { Fail, Drop, PlateMeanImpute };

[[nodiscard]] std::string_view to_string(MissingPolicy policy);
[[nodiscard]] MissingPolicy parse_missing_policy(std::string_view token);

struct PreprocessReport {
    std::size_t imputed = 0;
    std::size_t dropped = 0;
    std::size_t winsorized = 0;
    double lower_bound = -std::numeric_limits<double>::infinity();
    double upper_bound = std::numeric_limits<double>::infinity();
};

struct PreprocessResult {
    MetaboliteSeries series;
    PreprocessReport report;
};

/// Applies the missing-data policy, then winsorizes every value with
/// |x - mean| >= outlier_sigma * SD to mean +/- outlier_sigma * SD. Mean and
/// SD are taken once from the series after missing-data handling.
/// An infinite outlier_sigma disables winsorization.
[[nodiscard]] PreprocessResult preprocess(const MetaboliteSeries& series, MissingPolicy policy,
                                          double outlier_sigma = 3.0);

}  // namespace winnbeta
