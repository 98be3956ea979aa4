// SPDX-License-Identifier: Apache-2.0
#include "cli.hpp"

#include <span>

#include <CLI11.hpp>

namespace winnbeta::cli {

namespace {

struct FlagBinding {
    const char* flag;
    const char* key;
    const char* help;
};

// Command-line spellings of the RunConfig fields a correction run accepts.
constexpr FlagBinding kCorrectFlags[] = {
    {"--alpha", "alpha", "significance level of every gate"},
    {"--max-df", "max_df", "largest spline df tried"},
    {"--lags", "lags", "Ljung-Box lags: N or auto"},
    {"--min-batch", "min_batch_size", "plates shorter than this are not detrended"},
    {"--variance-test", "variance_test", "fligner | levene-median | levene-mean"},
    {"--missing", "missing_policy", "fail | drop | impute"},
    {"--outlier-sigma", "outlier_sigma", "winsorization threshold in SDs, or inf"},
    {"--workers", "workers", "worker threads: N or auto"},
};

void bind_overrides(CLI::App& cmd, std::map<std::string, std::string>& raw, std::span<const FlagBinding> flags) {
    for (const auto& f : flags) cmd.add_option(f.flag, raw[f.key], f.help);
}

Overrides given(const CLI::App& cmd, const std::map<std::string, std::string>& raw,
                std::span<const FlagBinding> flags) {
    Overrides out;
    for (const auto& f : flags) {
        if (cmd.count(f.flag) > 0) out[f.key] = raw.at(f.key);
    }
    return out;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Batch and drift correction of run-ordered metabolomics data by white-noise normalization",
                 "winnbeta"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "winnbeta 0.1.0");

    CorrectArgs correct;
    std::string correct_config;
    std::map<std::string, std::string> correct_raw;
    auto* c = app.add_subcommand("correct", "correct every metabolite of a study");
    c->add_option("--samples", correct.samples, "sample sheet CSV")->required();
    c->add_option("--intensities", correct.intensities, "intensity matrix CSV")->required();
    c->add_option("--out", correct.out, "output directory")->required();
    c->add_option("--config", correct_config, "key = value config file");
    bind_overrides(*c, correct_raw, kCorrectFlags);

    EvaluateCvArgs evaluate;
    auto* e = app.add_subcommand("evaluate-cv", "compare QC coefficients of variation before and after");
    e->add_option("--run", evaluate.run, "output directory of a correct run")->required();
    e->add_option("--out", evaluate.out, "output directory")->required();

    SimulateArgs simulate;
    std::uint64_t seed = 0;
    std::string simulate_config;
    std::map<std::string, std::string> simulate_raw;
    auto* s = app.add_subcommand("simulate", "run the seeded drift-recovery benchmark");
    s->add_option("--out", simulate.out, "output directory")->required();
    s->add_option("--seed", seed, "master seed");
    s->add_option("--scenario", simulate.scenarios, "scenario to run; repeatable, default all");
    s->add_option("--config", simulate_config, "key = value config file");
    bind_overrides(*s, simulate_raw, kCorrectFlags);

    ReportArgs report;
    auto* r = app.add_subcommand("report", "render SVG figures from report tables");
    r->add_option("--run", report.run, "directory with cv_cdf.csv and/or benchmark_report.csv")->required();
    r->add_option("--out", report.out, "output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& ex) {
        const int code = app.exit(ex, out, err);
        return code == 0 ? kOk : kUsage;
    }

    if (c->parsed()) {
        if (!correct_config.empty()) correct.config = correct_config;
        correct.overrides = given(*c, correct_raw, kCorrectFlags);
        return cmd_correct(correct, err);
    }
    if (e->parsed()) return cmd_evaluate_cv(evaluate, err);
    if (s->parsed()) {
        if (s->count("--seed") > 0) simulate.seed = seed;
        if (!simulate_config.empty()) simulate.config = simulate_config;
        simulate.overrides = given(*s, simulate_raw, kCorrectFlags);
        return cmd_simulate(simulate, err);
    }
    return cmd_report(report, err);
}

}  // namespace winnbeta::cli
