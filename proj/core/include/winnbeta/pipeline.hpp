// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "winnbeta/batch_correction.hpp"
#include "winnbeta/config.hpp"
#include "winnbeta/data_model.hpp"
#include "winnbeta/detrending.hpp"

namespace winnbeta {

/// Everything needed to replay one metabolite's correction.
struct CorrectionLog {
    std::string metabolite;
    std::optional<PreprocessReport> preprocess;
    BatchState phase1;
    /// White-noise test of the series after Phase 1 (the detrending gate).
    std::optional<TestResult> study_wn_gate;
    std::vector<DetrendDecision> phase2;
    std::optional<BatchState> phase3;
    std::optional<TestResult> study_wn_before;  // raw input series
    std::optional<TestResult> study_wn_after;   // corrected output series
    std::vector<std::string> flags;
    bool study_gate_enabled = true;
    bool failed = false;

    [[nodiscard]] std::size_t plates_detrended() const;
    [[nodiscard]] bool any_correction() const;
    /// Metabolite-level white-noise failure: the study gate failed, or, with
    /// the gate disabled, any plate failed.
    [[nodiscard]] bool wn_failed(double alpha) const;
    /// Every detrended plate passes the white-noise test afterwards.
    [[nodiscard]] bool detrend_passed(double alpha) const;
};

struct CorrectionResult {
    MetaboliteSeries series;
    CorrectionLog log;
};

/// Phase 1, Phase 2, Phase 3 on one preprocessed series. Library errors are
/// contained: the input is returned unchanged with failed = true.
[[nodiscard]] CorrectionResult winnbeta_correct(const MetaboliteSeries& series,
                                                const RunConfig& config);

struct CorrectionSummary {
    std::size_t n_metabolites = 0;
    std::size_t n_completed = 0;
    std::size_t n_failed = 0;
    std::size_t n_variance_normalized = 0;
    std::size_t n_residualized = 0;
    std::size_t n_wn_failed = 0;
    std::size_t n_detrended = 0;
    std::size_t n_detrend_passed = 0;

    /// Percentages over completed metabolites; detrend-passed is over those
    /// with at least one detrended plate. 0 when the denominator is 0.
    [[nodiscard]] double pct_variance_normalized() const;
    [[nodiscard]] double pct_residualized() const;
    [[nodiscard]] double pct_wn_failed() const;
    [[nodiscard]] double pct_detrend_passed() const;
};

[[nodiscard]] CorrectionSummary summarize(const std::vector<CorrectionLog>& logs, double alpha);

struct StudyCorrection {
    StudyMatrix corrected;
    std::vector<CorrectionLog> logs;
    CorrectionSummary summary;
};

/// Preprocesses and corrects every metabolite over experimental wells.
/// QC wells, missing cells and columns where no gate fired pass through
/// untouched. Output is independent
/// of the worker count.
[[nodiscard]] StudyCorrection correct_study(const StudyMatrix& study, const RunConfig& config);

[[nodiscard]] std::size_t resolve_workers(const RunConfig& config);

}  // namespace winnbeta
