// SPDX-License-Identifier: Apache-2.0
#include "winnbeta/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "winnbeta/errors.hpp"
#include "parallel.hpp"

namespace winnbeta {

namespace {

std::optional<TestResult> study_wn(const MetaboliteSeries& series, const RunConfig& config) {
    if (series.size() < 3) return std::nullopt;
    try {
        return ljung_box(series.values, lags_for(series.size(), config));
    } catch (const Error&) {
        return std::nullopt;
    }
}

double percent(std::size_t count, std::size_t total) {
    return total == 0 ? 0.0 : 100.0 * static_cast<double>(count) / static_cast<double>(total);
}

}  // namespace

std::size_t CorrectionLog::plates_detrended() const {
    return static_cast<std::size_t>(
        std::count_if(phase2.begin(), phase2.end(), [](const auto& d) { return d.detrended; }));
}

bool CorrectionLog::any_correction() const {
    return phase1.variance_normalized || phase1.residualized || plates_detrended() > 0 ||
           (phase3 && (phase3->variance_normalized || phase3->residualized));
}

bool CorrectionLog::wn_failed(double alpha) const {
    if (study_gate_enabled) return study_wn_gate && study_wn_gate->p_value < alpha;
    return std::any_of(phase2.begin(), phase2.end(), [alpha](const auto& d) {
        return d.wn_before && d.wn_before->p_value < alpha;
    });
}

bool CorrectionLog::detrend_passed(double alpha) const {
    bool any = false;
    for (const auto& d : phase2) {
        if (!d.detrended) continue;
        any = true;
        if (!d.wn_after || d.wn_after->p_value < alpha) return false;
    }
    return any;
}

CorrectionResult winnbeta_correct(const MetaboliteSeries& series, const RunConfig& config) {
    CorrectionResult result{series, {}};
    auto& log = result.log;
    log.metabolite = series.name;
    try {
        series.validate();
        if (series.has_missing()) {
            throw MissingDataError("series contains missing values; preprocess first");
        }
        log.study_wn_before = study_wn(series, config);

        auto p1 = phase1(series, config.alpha, config.variance_test);
        log.phase1 = std::move(p1.state);

        auto p2 = phase2(p1.series, config);
        log.study_wn_gate = p2.study_wn;
        log.phase2 = std::move(p2.decisions);
        log.flags.insert(log.flags.end(), p2.flags.begin(), p2.flags.end());
        log.study_gate_enabled = config.study_wn_gate;

        MetaboliteSeries output = std::move(p2.series);
        if (config.always_phase3 || log.plates_detrended() > 0) {
            auto p3 = phase1(output, config.alpha, config.variance_test);
            log.phase3 = std::move(p3.state);
            output = std::move(p3.series);
        }
        log.study_wn_after = study_wn(output, config);

        result.series = std::move(output);
    } catch (const Error& e) {
        log.failed = true;
        log.flags.push_back(std::string("error:") + e.what());
        result.series = series;
    }
    return result;
}

double CorrectionSummary::pct_variance_normalized() const {
    return percent(n_variance_normalized, n_completed);
}
double CorrectionSummary::pct_residualized() const { return percent(n_residualized, n_completed); }
double CorrectionSummary::pct_wn_failed() const { return percent(n_wn_failed, n_completed); }
double CorrectionSummary::pct_detrend_passed() const {
    return percent(n_detrend_passed, n_detrended);
}

CorrectionSummary summarize(const std::vector<CorrectionLog>& logs, double alpha) {
    CorrectionSummary s;
    s.n_metabolites = logs.size();
    for (const auto& log : logs) {
        if (log.failed) {
            ++s.n_failed;
            continue;
        }
        ++s.n_completed;
        if (log.phase1.variance_normalized) ++s.n_variance_normalized;
        if (log.phase1.residualized) ++s.n_residualized;
        if (log.wn_failed(alpha)) ++s.n_wn_failed;
        if (log.plates_detrended() > 0) {
            ++s.n_detrended;
            if (log.detrend_passed(alpha)) ++s.n_detrend_passed;
        }
    }
    return s;
}

std::size_t resolve_workers(const RunConfig& config) {
    if (config.workers) return std::max<std::size_t>(1, *config.workers);
    return std::max(1u, std::thread::hardware_concurrency());
}

StudyCorrection correct_study(const StudyMatrix& study, const RunConfig& config) {
    config.validate();
    validate_study(study);
    const std::size_t n_columns = study.n_metabolites();
    StudyCorrection out{study, std::vector<CorrectionLog>(n_columns), {}};
    std::vector<MetaboliteSeries> corrected(n_columns);

    auto process = [&](std::size_t column) {
        const auto& name = study.metabolite_names[column];
        const auto raw = extract_series(study, name, SampleSelection::Experimental);
        try {
            auto pre = preprocess(raw, config.missing_policy, config.outlier_sigma);
            auto result = winnbeta_correct(pre.series, config);
            result.log.preprocess = pre.report;
            if (pre.report.winsorized) {
                result.log.flags.push_back("winsorized:" + std::to_string(pre.report.winsorized));
            }
            if (pre.report.imputed) {
                result.log.flags.push_back("imputed:" + std::to_string(pre.report.imputed));
            }
            if (pre.report.dropped) {
                result.log.flags.push_back("dropped:" + std::to_string(pre.report.dropped));
            }
            corrected[column] = std::move(result.series);
            out.logs[column] = std::move(result.log);
        } catch (const Error& e) {
            CorrectionLog log;
            log.metabolite = name;
            log.failed = true;
            log.flags.push_back(std::string("error:") + e.what());
            out.logs[column] = std::move(log);
            corrected[column] = raw;
        }
    };

    detail::parallel_for(n_columns, resolve_workers(config), process);

    for (std::size_t c = 0; c < n_columns; ++c) {
        // Preprocessing only feeds the gates; a column no gate touched is
        // written back as it came in.
        if (out.logs[c].failed || !out.logs[c].any_correction()) continue;
        const auto& series = corrected[c];
        for (std::size_t k = 0; k < series.size(); ++k) {
            auto& cell = out.corrected.intensities[static_cast<std::size_t>(series.run_order[k] - 1)][c];
            // Missing cells stay missing even when a policy filled them in.
            if (cell) cell = series.values[k];
        }
    }
    out.summary = summarize(out.logs, config.alpha);
    return out;
}

}  // namespace winnbeta
