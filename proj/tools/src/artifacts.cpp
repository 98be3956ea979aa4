// SPDX-License-Identifier: Apache-2.0
#include "artifacts.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "winnbeta/csv.hpp"
#include "winnbeta/errors.hpp"

namespace winnbeta::cli {

using nlohmann::ordered_json;

namespace {

std::string num(double v) { return csv::format_double(v); }

std::string opt_p(const std::optional<TestResult>& t) { return t ? num(t->p_value) : std::string(); }

std::string join(const std::vector<std::string>& parts, char sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out += sep;
        out += parts[i];
    }
    return out;
}

// JSON has no infinities; a degenerate statistic is written as null.
ordered_json real(double v) { return std::isfinite(v) ? ordered_json(v) : ordered_json(nullptr); }

ordered_json test_json(const std::optional<TestResult>& t) {
    if (!t) return nullptr;
    ordered_json j;
    j["test"] = std::string(to_string(t->test_name));
    j["statistic"] = real(t->statistic);
    j["dof"] = t->dof;
    if (t->dof_denom) j["dof_denom"] = t->dof_denom;
    j["p_value"] = real(t->p_value);
    j["degenerate"] = t->degenerate;
    return j;
}

ordered_json state_json(const BatchState& s) {
    ordered_json j;
    j["state"] = s.state_index();
    j["variance_normalized"] = s.variance_normalized;
    j["residualized"] = s.residualized;
    j["variance_test"] = test_json(s.variance_test);
    j["mean_test"] = test_json(s.mean_test);
    j["plate_sds"] = ordered_json::object();
    for (const auto& [plate, sd] : s.plate_sds) j["plate_sds"][plate] = sd;
    j["plate_means"] = ordered_json::object();
    for (const auto& [plate, m] : s.plate_means) j["plate_means"][plate] = m;
    j["flags"] = s.flags;
    return j;
}

ordered_json decision_json(const DetrendDecision& d) {
    ordered_json j;
    j["plate"] = d.plate;
    j["n"] = d.n;
    j["wn_before"] = test_json(d.wn_before);
    j["detrended"] = d.detrended;
    j["chosen_df"] = d.chosen_df ? ordered_json(*d.chosen_df) : ordered_json(nullptr);
    j["wn_after"] = test_json(d.wn_after);
    ordered_json profile = ordered_json::array();
    for (const auto& e : d.df_profile) {
        profile.push_back({{"df", e.df}, {"statistic", real(e.statistic)}, {"p_value", real(e.p_value)}});
    }
    j["df_profile"] = std::move(profile);
    j["flags"] = d.flags;
    return j;
}

}  // namespace

void write_text(const std::filesystem::path& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IngestionError("cannot write " + path.string());
    out << contents;
    if (!out) throw IngestionError("failed writing " + path.string());
}

std::string correction_log_csv(const std::vector<CorrectionLog>& logs) {
    std::ostringstream out;
    out << "metabolite,var_norm,var_p,resid,resid_p,plates_detrended,chosen_dfs,wn_p_before,"
           "wn_p_after,phase3_var_norm,phase3_resid,flags\n";
    for (const auto& log : logs) {
        std::vector<std::string> dfs;
        for (const auto& d : log.phase2) {
            if (d.detrended && d.chosen_df) dfs.push_back(d.plate + ":" + std::to_string(*d.chosen_df));
        }
        std::vector<std::string> row{
            log.metabolite,
            log.phase1.variance_normalized ? "1" : "0",
            log.phase1.variance_test ? num(log.phase1.variance_test->p_value) : "",
            log.phase1.residualized ? "1" : "0",
            log.phase1.mean_test ? num(log.phase1.mean_test->p_value) : "",
            std::to_string(log.plates_detrended()),
            join(dfs, ';'),
            opt_p(log.study_wn_before),
            opt_p(log.study_wn_after),
            log.phase3 ? (log.phase3->variance_normalized ? "1" : "0") : "",
            log.phase3 ? (log.phase3->residualized ? "1" : "0") : "",
            join(log.flags, ';'),
        };
        out << csv::join(row) << '\n';
    }
    return out.str();
}

ordered_json correction_log_json(const std::vector<CorrectionLog>& logs) {
    ordered_json arr = ordered_json::array();
    for (const auto& log : logs) {
        ordered_json j;
        j["metabolite"] = log.metabolite;
        j["failed"] = log.failed;
        j["flags"] = log.flags;
        if (log.preprocess) {
            const auto& p = *log.preprocess;
            j["preprocess"] = {{"imputed", p.imputed},
                               {"dropped", p.dropped},
                               {"winsorized", p.winsorized},
                               {"lower_bound", real(p.lower_bound)},
                               {"upper_bound", real(p.upper_bound)}};
        } else {
            j["preprocess"] = nullptr;
        }
        j["study_wn_before"] = test_json(log.study_wn_before);
        j["phase1"] = state_json(log.phase1);
        j["study_gate_enabled"] = log.study_gate_enabled;
        j["study_wn_gate"] = test_json(log.study_wn_gate);
        ordered_json phase2 = ordered_json::array();
        for (const auto& d : log.phase2) phase2.push_back(decision_json(d));
        j["phase2"] = std::move(phase2);
        j["phase3"] = log.phase3 ? state_json(*log.phase3) : ordered_json(nullptr);
        j["study_wn_after"] = test_json(log.study_wn_after);
        arr.push_back(std::move(j));
    }
    return arr;
}

ordered_json summary_json(const CorrectionSummary& s, double alpha) {
    ordered_json j;
    j["alpha"] = alpha;
    j["n_metabolites"] = s.n_metabolites;
    j["n_completed"] = s.n_completed;
    j["n_failed"] = s.n_failed;
    j["n_variance_normalized"] = s.n_variance_normalized;
    j["n_residualized"] = s.n_residualized;
    j["n_wn_failed"] = s.n_wn_failed;
    j["n_detrended"] = s.n_detrended;
    j["n_detrend_passed"] = s.n_detrend_passed;
    j["pct_variance_normalized"] = s.pct_variance_normalized();
    j["pct_residualized"] = s.pct_residualized();
    j["pct_wn_failed"] = s.pct_wn_failed();
    j["pct_detrend_passed"] = s.pct_detrend_passed();
    return j;
}

std::string cv_report_csv(const CvEvaluation& eval) {
    std::ostringstream out;
    out << "metabolite,cv_before,cv_after,n_qc,flags\n";
    for (const auto& r : eval.reports) {
        out << csv::join({r.metabolite, r.valid ? num(r.cv_before) : "", r.valid ? num(r.cv_after) : "",
                          std::to_string(r.n_qc), join(r.flags, ';')})
            << '\n';
    }
    return out.str();
}

std::string cv_cdf_csv(const CvSummary& summary) {
    std::ostringstream out;
    out << "cv_threshold,frac_before,frac_after\n";
    char buf[16];
    for (const auto& row : summary.cdf) {
        std::snprintf(buf, sizeof buf, "%.2f", row.threshold);
        out << buf << ',' << num(row.frac_before) << ',' << num(row.frac_after) << '\n';
    }
    return out.str();
}

ordered_json cv_summary_json(const CvSummary& s) {
    return {{"threshold", s.threshold},       {"n_valid", s.n_valid},
            {"n_invalid", s.n_invalid},       {"below_threshold_before", s.below_before},
            {"below_threshold_after", s.below_after}};
}

std::string benchmark_csv(const std::vector<sim::ReportRow>& rows) {
    std::ostringstream out;
    out << "scenario,metric,before,after\n";
    for (const auto& r : rows) out << csv::join({r.scenario, r.metric, num(r.before), num(r.after)}) << '\n';
    return out.str();
}

std::string trace_csv(const sim::ScenarioOutcome& o) {
    std::ostringstream out;
    out << "run_order,plate,truth,distorted,corrected\n";
    for (std::size_t i = 0; i < o.sim.truth.size(); ++i) {
        out << csv::join({std::to_string(i + 1), o.sim.plate_of[i], num(o.sim.truth[i]), num(o.sim.distorted[i]),
                          num(o.corrected[i])})
            << '\n';
    }
    return out.str();
}

}  // namespace winnbeta::cli
