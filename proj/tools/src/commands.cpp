// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "artifacts.hpp"
#include "cli.hpp"
#include "svg.hpp"
#include "winnbeta/csv.hpp"
#include "winnbeta/data_model.hpp"
#include "winnbeta/errors.hpp"
#include "winnbeta/pipeline.hpp"
#include "winnbeta/qc_evaluation.hpp"
#include "winnbeta/simulation.hpp"

namespace winnbeta::cli {

namespace {

// Keys a config file assigns.
std::set<std::string> keys_in_config_file(const fs::path& path) {
    std::ifstream in(path);
    std::set<std::string> keys;
    std::string line;
    while (std::getline(in, line)) {
        const auto body = csv::trim(line.substr(0, line.find('#')));
        const auto eq = body.find('=');
        if (eq != std::string::npos) keys.insert(std::string(csv::trim(body.substr(0, eq))));
    }
    return keys;
}

void ensure_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IngestionError("cannot create output directory " + dir.string() + ": " + ec.message());
}

void require_file(const fs::path& path) {
    if (!fs::is_regular_file(path)) throw IngestionError("required file not found: " + path.string());
}

std::string dump(const nlohmann::ordered_json& j) { return j.dump(2) + "\n"; }

template <class Fn>
int guarded(std::ostream& log, const char* command, Fn&& fn) {
    try {
        return fn();
    } catch (const Error& e) {
        log << "winnbeta " << command << ": error: " << e.what() << '\n';
    } catch (const fs::filesystem_error& e) {
        log << "winnbeta " << command << ": error: " << e.what() << '\n';
    }
    return kFatal;
}

}  // namespace

RunConfig resolve_config(const std::optional<fs::path>& config_file, const Overrides& overrides,
                         std::ostream& log) {
    RunConfig config;
    std::set<std::string> from_file;
    if (config_file) {
        config = load_config(*config_file);
        from_file = keys_in_config_file(*config_file);
    }
    for (const auto& [key, value] : overrides) set_config_value(config, key, value);
    config.validate();

    log << "effective configuration:\n";
    std::istringstream text(to_text(config));
    std::string line;
    while (std::getline(text, line)) {
        const auto eq = line.find('=');
        if (line.empty() || line[0] == '#' || eq == std::string::npos) continue;
        const std::string key(csv::trim(line.substr(0, eq)));
        const char* source = overrides.contains(key) ? "flag" : from_file.contains(key) ? "config file" : "default";
        log << "  " << line << "  (" << source << ")\n";
    }
    return config;
}

int cmd_correct(const CorrectArgs& args, std::ostream& log) {
    return guarded(log, "correct", [&] {
        const auto config = resolve_config(args.config, args.overrides, log);
        const auto study = load_study(args.samples, args.intensities);
        log << "loaded " << study.n_wells() << " wells x " << study.n_metabolites() << " metabolites ("
            << study.count(SampleType::Qc) << " QC wells)\n";

        const auto result = correct_study(study, config);

        // All writes happen after the parallel join, in a fixed order.
        ensure_dir(args.out);
        write_samples(study, args.out / files::kSamples);
        write_intensities(study, args.out / files::kInputIntensities);
        write_intensities(result.corrected, args.out / files::kCorrected);
        write_text(args.out / files::kLogCsv, correction_log_csv(result.logs));
        write_text(args.out / files::kLogJson, dump(correction_log_json(result.logs)));
        write_text(args.out / files::kSummary, dump(summary_json(result.summary, config.alpha)));
        write_text(args.out / files::kConfig, to_text(config));

        std::size_t skipped = 0;
        for (const auto& l : result.logs) {
            if (!l.failed) continue;
            ++skipped;
            log << "warning: metabolite '" << l.metabolite << "' left uncorrected: "
                << (l.flags.empty() ? std::string("failed") : l.flags.back()) << '\n';
        }
        const auto& s = result.summary;
        log << "corrected " << s.n_completed << " of " << s.n_metabolites << " metabolites";
        if (skipped) log << " (" << skipped << " skipped with warnings)";
        log << "; variance-normalized " << s.pct_variance_normalized() << "%, residualized "
            << s.pct_residualized() << "%, WN-failed " << s.pct_wn_failed() << "%, detrend-passed "
            << s.pct_detrend_passed() << "%\n";
        return kOk;
    });
}

int cmd_evaluate_cv(const EvaluateCvArgs& args, std::ostream& log) {
    return guarded(log, "evaluate-cv", [&] {
        for (const char* f : {files::kSamples, files::kInputIntensities, files::kCorrected}) require_file(args.run / f);
        RunConfig config;
        if (fs::is_regular_file(args.run / files::kConfig)) config = load_config(args.run / files::kConfig);

        const auto original = load_study(args.run / files::kSamples, args.run / files::kInputIntensities);
        const auto corrected = load_study(args.run / files::kSamples, args.run / files::kCorrected);
        if (original.count(SampleType::Qc) == 0) {
            throw ParameterError("study has no QC wells; CV evaluation compares pooled QC samples before and "
                                 "after correction and cannot run without them");
        }
        const auto eval = cv_report(original, corrected, config.compat_literal_zm, 0.2);

        ensure_dir(args.out);
        write_text(args.out / files::kCvReport, cv_report_csv(eval));
        write_text(args.out / files::kCvCdf, cv_cdf_csv(eval.summary));
        write_text(args.out / files::kCvSummary, dump(cv_summary_json(eval.summary)));

        for (const auto& r : eval.reports) {
            if (!r.valid) log << "warning: metabolite '" << r.metabolite << "': " << r.flags.back() << '\n';
        }
        log << "CV < " << eval.summary.threshold << ": " << eval.summary.below_before << " before, "
            << eval.summary.below_after << " after, of " << eval.summary.n_valid << " valid metabolites\n";
        return kOk;
    });
}

int cmd_simulate(const SimulateArgs& args, std::ostream& log) {
    return guarded(log, "simulate", [&] {
        sim::BenchmarkConfig bench;
        bench.run = resolve_config(args.config, args.overrides, log);
        if (args.seed) bench.master_seed = *args.seed;
        else if (bench.run.seed) bench.master_seed = *bench.run.seed;
        bench.run.seed = bench.master_seed;
        for (const auto& name : args.scenarios) (void)sim::scenario_spec(name, 0, bench);
        bench.scenarios = args.scenarios;
        log << "seed " << bench.master_seed << ", rng " << sim::Rng::kAlgorithm << '\n';

        const auto report = sim::benchmark_suite(bench);

        ensure_dir(args.out / files::kTraces);
        write_text(args.out / files::kBenchmark, benchmark_csv(sim::report_rows(report)));
        for (const auto& o : report.outcomes) {
            write_text(args.out / files::kTraces / (o.scenario + ".csv"), trace_csv(o));
        }
        write_text(args.out / files::kConfig,
                   "# rng: " + std::string(sim::Rng::kAlgorithm) + "\n" + to_text(bench.run));
        for (const auto& o : report.outcomes) {
            log << o.scenario << ": rmse " << o.before.rmse << " -> " << o.after.rmse << ", centered rmse "
                << o.centered_rmse_before << " -> " << o.centered_rmse_after << '\n';
        }
        return kOk;
    });
}

namespace {

std::vector<std::vector<std::string>> data_rows(const fs::path& path, const std::vector<std::string>& header) {
    const auto table = csv::read(path);
    if (table.header != header) {
        throw IngestionError(path.string() + ": unexpected header, expected " + csv::join(header));
    }
    if (table.rows.empty()) throw IngestionError(path.string() + ": table has no rows");
    return table.rows;
}

double cell(const std::vector<std::string>& row, std::size_t i, const fs::path& path) {
    const auto v = i < row.size() ? csv::parse_cell(row[i]) : std::nullopt;
    if (!v) throw IngestionError(path.string() + ": missing numeric value");
    return *v;
}

std::string safe_name(std::string s) {
    for (char& c : s) {
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '-' && c != '_') c = '_';
    }
    return s;
}

}  // namespace

int cmd_report(const ReportArgs& args, std::ostream& log) {
    return guarded(log, "report", [&] {
        const auto cdf_path = args.run / files::kCvCdf;
        const auto bench_path = args.run / files::kBenchmark;
        const bool have_cdf = fs::is_regular_file(cdf_path);
        const bool have_bench = fs::is_regular_file(bench_path);
        if (!have_cdf && !have_bench) {
            throw IngestionError("no report inputs in " + args.run.string() + " (expected " + files::kCvCdf +
                                 " or " + files::kBenchmark + ")");
        }

        std::vector<std::pair<fs::path, std::string>> outputs;
        if (have_cdf) {
            svg::Curve before{"before correction", "#7f8c8d", {}, {}};
            svg::Curve after{"after correction", "#c0392b", {}, {}};
            for (const auto& row : data_rows(cdf_path, {"cv_threshold", "frac_before", "frac_after"})) {
                const double t = cell(row, 0, cdf_path);
                before.x.push_back(t);
                after.x.push_back(t);
                before.y.push_back(cell(row, 1, cdf_path));
                after.y.push_back(cell(row, 2, cdf_path));
            }
            outputs.emplace_back(args.out / files::kCvPlot,
                                 svg::cdf_plot("Cumulative distribution of QC CVs", "CV threshold",
                                               "fraction of metabolites with CV <= threshold", {before, after}));
        }
        if (have_bench) {
            std::vector<std::string> order;
            std::map<std::string, std::map<std::string, std::pair<double, double>>> metrics;
            for (const auto& row : data_rows(bench_path, {"scenario", "metric", "before", "after"})) {
                if (row.size() < 4) throw IngestionError(bench_path.string() + ": short row");
                if (!metrics.contains(row[0])) order.push_back(row[0]);
                metrics[row[0]][row[1]] = {cell(row, 2, bench_path), cell(row, 3, bench_path)};
            }
            for (const auto& scenario : order) {
                const auto& m = metrics[scenario];
                const auto get = [&](const char* key, bool after) {
                    const auto it = m.find(key);
                    if (it == m.end()) throw IngestionError(bench_path.string() + ": " + scenario + " lacks " + key);
                    return after ? it->second.second : it->second.first;
                };
                std::vector<svg::Box> boxes;
                for (bool after : {false, true}) {
                    boxes.push_back({after ? "after" : "before", get("whisker_low", after), get("q1", after),
                                     get("median", after), get("q3", after), get("whisker_high", after)});
                }
                outputs.emplace_back(args.out / ("boxplot_" + safe_name(scenario) + ".svg"),
                                     svg::box_plot("Error vs truth: " + scenario, "corrected - truth", boxes));
            }
        }

        ensure_dir(args.out);
        for (const auto& [path, text] : outputs) {
            write_text(path, text);
            log << "wrote " << path.string() << '\n';
        }
        return kOk;
    });
}

}  // namespace winnbeta::cli
