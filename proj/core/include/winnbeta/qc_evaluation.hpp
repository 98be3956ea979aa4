// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "winnbeta/data_model.hpp"

namespace winnbeta {

/// Sample SD (n-1) over mean. Throws DomainError for mean <= 0 and
/// ParameterError for fewer than two values.
[[nodiscard]] double cv(std::span<const double> values);

struct QcRescale {
    std::vector<double> values;
    double a = 1.0;
    double b = 0.0;
};

/// Affine map a * qc + b that moves the QC mean onto experimental_mean while
/// keeping CV(qc): a = CV(qc) * mean_e / SD(qc), b = mean_e - a * mean(qc).
[[nodiscard]] QcRescale rescale_qc(std::span<const double> qc, double experimental_mean);

/// Centered shift-and-scale: mean and SD of the result equal orig_mean and
/// orig_sd.
[[nodiscard]] std::vector<double> restore_scale(std::span<const double> y_winn, double orig_mean,
                                                double orig_sd);

/// (y_winn + mean(y_orig) - mean(y_winn)) * SD(y_orig) / SD(y_winn), applied
/// literally. Matches the SD but not, in general, the mean.
[[nodiscard]] std::vector<double> restore_scale_literal(std::span<const double> y_winn,
                                                        std::span<const double> y_orig);

/// Elementwise z / y_orig. Entries with y_orig == 0, or |y_orig| below
/// 1e-9 * SD(y_orig), are NaN (excluded from interpolation).
[[nodiscard]] std::vector<double> correction_ratio(std::span<const double> z,
                                                   std::span<const double> y_orig);

struct QcCorrection {
    std::vector<double> values;        // R_interp * qc_rescaled
    std::vector<double> interpolated;  // R_interp per QC well
    std::size_t clamped = 0;           // QC wells outside the experimental range
};

/// Linear interpolation of the ratios between the bracketing experimental
/// run orders; QC wells outside the range take the nearest ratio. NaN
/// ratios are skipped. exp_orders must be strictly increasing.
[[nodiscard]] QcCorrection apply_qc_correction(std::span<const int> qc_orders,
                                               std::span<const int> exp_orders,
                                               std::span<const double> ratio,
                                               std::span<const double> qc_rescaled);

/// The full transfer chain for one metabolite.
struct QcTransfer {
    double a = 1.0;
    double b = 0.0;
    std::vector<double> qc_rescaled;
    std::vector<double> z;
    std::vector<double> ratio;
    std::vector<double> qc_corrected;
    std::size_t excluded_ratios = 0;
    std::size_t clamped = 0;
};

[[nodiscard]] QcTransfer transfer_correction(std::span<const double> qc,
                                             std::span<const int> qc_orders,
                                             std::span<const double> exp_original,
                                             std::span<const double> exp_corrected,
                                             std::span<const int> exp_orders,
                                             bool literal_zm = false);

struct CvReport {
    std::string metabolite;
    double cv_before = 0.0;
    double cv_after = 0.0;
    std::size_t n_qc = 0;
    bool valid = true;
    std::vector<std::string> flags;
};

struct CdfRow {
    double threshold = 0.0;
    double frac_before = 0.0;
    double frac_after = 0.0;
};

struct CvSummary {
    std::size_t n_valid = 0;
    std::size_t n_invalid = 0;
    std::size_t below_before = 0;  // CV < threshold
    std::size_t below_after = 0;
    double threshold = 0.2;
    /// Fraction of valid metabolites with CV <= t, t = 0.00, 0.01, ..., 1.00.
    std::vector<CdfRow> cdf;
};

struct CvEvaluation {
    std::vector<CvReport> reports;
    CvSummary summary;
};

/// CV of raw QC wells against CV of the QC wells after transferring each
/// metabolite's experimental correction. Throws ParameterError when the
/// study has no QC wells.
[[nodiscard]] CvEvaluation cv_report(const StudyMatrix& original, const StudyMatrix& corrected,
                                     bool literal_zm = false, double threshold = 0.2);

/// Pearson correlation of midranks. Throws DegenerateError on zero rank
/// variance.
[[nodiscard]] double spearman(std::span<const double> x, std::span<const double> y);

}  // namespace winnbeta
