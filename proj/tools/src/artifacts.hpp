// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "winnbeta/pipeline.hpp"
#include "winnbeta/qc_evaluation.hpp"
#include "winnbeta/simulation.hpp"

namespace winnbeta::cli {

/// Writes `contents` to `path` in binary mode; throws IngestionError.
void write_text(const std::filesystem::path& path, const std::string& contents);

[[nodiscard]] std::string correction_log_csv(const std::vector<CorrectionLog>& logs);
[[nodiscard]] nlohmann::ordered_json correction_log_json(const std::vector<CorrectionLog>& logs);
[[nodiscard]] nlohmann::ordered_json summary_json(const CorrectionSummary& summary, double alpha);

[[nodiscard]] std::string cv_report_csv(const CvEvaluation& eval);
[[nodiscard]] std::string cv_cdf_csv(const CvSummary& summary);
[[nodiscard]] nlohmann::ordered_json cv_summary_json(const CvSummary& summary);

[[nodiscard]] std::string benchmark_csv(const std::vector<sim::ReportRow>& rows);
[[nodiscard]] std::string trace_csv(const sim::ScenarioOutcome& outcome);

}  // namespace winnbeta::cli
