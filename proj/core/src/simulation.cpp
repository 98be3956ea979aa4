// SPDX-License-Identifier: Apache-2.0
#include "winnbeta/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "parallel.hpp"
#include "winnbeta/errors.hpp"
#include "winnbeta/qc_evaluation.hpp"

namespace winnbeta::sim {

double Rng::uniform() {
    // 53 random bits -> (0, 1); zero is rejected so log() below stays finite.
    for (;;) {
        const double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
        if (u > 0.0) return u;
    }
}

double Rng::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u, v, s;
    do {
        u = 2.0 * uniform() - 1.0;
        v = 2.0 * uniform() - 1.0;
        s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double factor = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * factor;
    has_spare_ = true;
    return u * factor;
}

std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t stream_id) {
    std::uint64_t z = master_seed + 0x9E3779B97F4A7C15ULL * (stream_id + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::string_view to_string(DriftShape shape) {
    switch (shape) {
        case DriftShape::Linear: return "linear";
        case DriftShape::PiecewiseLinear: return "piecewise_linear";
        case DriftShape::Sinusoidal: return "sinusoidal";
    }
    return "linear";
}

double Drift::at(double position, std::size_t wells_per_plate) const {
    switch (shape) {
        case DriftShape::Linear: return slope * position;
        case DriftShape::PiecewiseLinear: {
            double value = 0.0;
            double start = 0.0;
            for (std::size_t k = 0; k < slopes.size(); ++k) {
                const double end = k < breakpoints.size() ? breakpoints[k] : position;
                if (position <= end || k == breakpoints.size()) {
                    return value + slopes[k] * (position - start);
                }
                value += slopes[k] * (end - start);
                start = end;
            }
            return value;
        }
        case DriftShape::Sinusoidal:
            return amplitude * std::sin(2.0 * std::numbers::pi * cycles * position /
                                            static_cast<double>(wells_per_plate) +
                                        phase);
    }
    return 0.0;
}

void DriftSpec::validate() const {
    if (n_plates < 1 || wells_per_plate < 2) {
        throw ParameterError("drift spec needs at least one plate of two wells");
    }
    if (!(noise_sd > 0.0)) throw ParameterError("noise_sd must be positive");
    if (!batch_offsets.empty() && batch_offsets.size() != n_plates) {
        throw ParameterError("batch_offsets must be empty or have one entry per plate");
    }
    for (const auto& d : drifts) {
        if (d.plate >= n_plates) {
            throw ParameterError("drift references plate " + std::to_string(d.plate) +
                                 " but the DriftSpec has " + std::to_string(n_plates));
        }
        if (d.shape == DriftShape::PiecewiseLinear) {
            if (d.slopes.size() != d.breakpoints.size() + 1) {
                throw ParameterError("piecewise-linear drift needs one more slope than breakpoints");
            }
            double last = 0.0;
            for (double b : d.breakpoints) {
                if (!(b > last && b < static_cast<double>(wells_per_plate - 1))) {
                    throw ParameterError(
                        "piecewise-linear breakpoints must increase strictly inside the plate");
                }
                last = b;
            }
        }
    }
}

std::string plate_label(std::size_t plate) {
    std::string label = std::to_string(plate + 1);
    if (label.size() < 2) label.insert(0, "0");
    return "P" + label;
}

std::vector<double> distortion_of(const DriftSpec& spec) {
    spec.validate();
    const std::size_t n = spec.n_plates * spec.wells_per_plate;
    std::vector<double> d(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t plate = i / spec.wells_per_plate;
        if (!spec.batch_offsets.empty()) d[i] += spec.batch_offsets[plate];
    }
    for (const auto& drift : spec.drifts) {
        const std::size_t begin = drift.plate * spec.wells_per_plate;
        for (std::size_t p = 0; p < spec.wells_per_plate; ++p) {
            d[begin + p] += drift.at(static_cast<double>(p), spec.wells_per_plate);
        }
    }
    return d;
}

SimulatedMetabolite generate(const DriftSpec& spec) {
    SimulatedMetabolite sim;
    sim.spec = spec;
    sim.distortion = distortion_of(spec);
    const std::size_t n = sim.distortion.size();
    Rng rng(spec.seed);
    sim.truth.resize(n);
    sim.distorted.resize(n);
    sim.plate_of.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        sim.truth[i] = rng.normal(spec.baseline, spec.noise_sd);
        sim.distorted[i] = sim.truth[i] + sim.distortion[i];
        sim.plate_of[i] = plate_label(i / spec.wells_per_plate);
    }
    return sim;
}

MetaboliteSeries SimulatedMetabolite::to_series(std::string name, bool use_distorted) const {
    MetaboliteSeries s;
    s.name = std::move(name);
    s.values = use_distorted ? distorted : truth;
    s.plate_of = plate_of;
    s.run_order.resize(s.values.size());
    for (std::size_t i = 0; i < s.run_order.size(); ++i) s.run_order[i] = static_cast<int>(i + 1);
    return s;
}

double quantile(std::vector<double> values, double prob) {
    if (values.empty()) throw ParameterError("quantile of empty sample");
    std::sort(values.begin(), values.end());
    const double h = (static_cast<double>(values.size()) - 1.0) * prob;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const auto hi = std::min(lo + 1, values.size() - 1);
    return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

ErrorStats error_stats(std::span<const double> corrected, std::span<const double> truth) {
    if (corrected.size() != truth.size()) throw ParameterError("error_stats: length mismatch");
    if (corrected.empty()) throw ParameterError("error_stats: empty input");
    std::vector<double> e(corrected.size());
    double ss = 0.0;
    for (std::size_t i = 0; i < e.size(); ++i) {
        e[i] = corrected[i] - truth[i];
        ss += e[i] * e[i];
    }
    ErrorStats s;
    s.median = quantile(e, 0.5);
    s.q1 = quantile(e, 0.25);
    s.q3 = quantile(e, 0.75);
    s.iqr = s.q3 - s.q1;
    s.rmse = std::sqrt(ss / static_cast<double>(e.size()));
    const double lo_fence = s.q1 - 1.5 * s.iqr;
    const double hi_fence = s.q3 + 1.5 * s.iqr;
    s.whisker_low = s.q1;
    s.whisker_high = s.q3;
    for (double v : e) {
        if (v >= lo_fence) s.whisker_low = std::min(s.whisker_low, v);
        if (v <= hi_fence) s.whisker_high = std::max(s.whisker_high, v);
    }
    return s;
}

double centered_rmse(std::span<const double> corrected, std::span<const double> truth,
                     std::span<const std::string> plate_of) {
    if (corrected.size() != truth.size() || plate_of.size() != truth.size()) {
        throw ParameterError("centered_rmse: length mismatch");
    }
    MetaboliteSeries errors;
    errors.plate_of.assign(plate_of.begin(), plate_of.end());
    errors.values.resize(truth.size());
    for (std::size_t i = 0; i < truth.size(); ++i) errors.values[i] = corrected[i] - truth[i];
    double ss = 0.0;
    for (const auto& group : partition_by_plate(errors)) {
        double m = 0.0;
        for (auto i : group.indices) m += errors.values[i];
        m /= static_cast<double>(group.indices.size());
        for (auto i : group.indices) ss += (errors.values[i] - m) * (errors.values[i] - m);
    }
    return std::sqrt(ss / static_cast<double>(truth.size()));
}

const std::vector<std::string>& scenario_names() {
    static const std::vector<std::string> names{
        "no_distortion",      "offsets_only",       "linear_some_plates", "piecewise_linear",
        "sinusoid_one_plate", "sinusoid_per_plate", "mixture"};
    return names;
}

namespace {

std::uint64_t scenario_id(std::string_view name) {
    const auto& names = scenario_names();
    const auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end()) {
        std::string valid;
        for (const auto& n : names) valid += (valid.empty() ? "" : ", ") + n;
        throw LookupError("unknown scenario '" + std::string(name) + "'; valid: " + valid);
    }
    return static_cast<std::uint64_t>(it - names.begin());
}

Drift piecewise(std::size_t plate, std::size_t wells, double amplitude, double sign) {
    // Zig-zag 0 -> A -> 0 -> A over three equal segments.
    const double third = static_cast<double>(wells - 1) / 3.0;
    const double s = sign * amplitude / third;
    Drift d;
    d.plate = plate;
    d.shape = DriftShape::PiecewiseLinear;
    d.breakpoints = {third, 2.0 * third};
    d.slopes = {s, -s, s};
    return d;
}

Drift sinusoid(std::size_t plate, double amplitude, double phase) {
    Drift d;
    d.plate = plate;
    d.shape = DriftShape::Sinusoidal;
    d.amplitude = amplitude;
    d.cycles = 1.0;
    d.phase = phase;
    return d;
}

Drift linear(std::size_t plate, double slope) {
    Drift d;
    d.plate = plate;
    d.shape = DriftShape::Linear;
    d.slope = slope;
    return d;
}

}  // namespace

DriftSpec scenario_spec(std::string_view name, std::uint64_t seed, const BenchmarkConfig& config) {
    const auto id = scenario_id(name);
    DriftSpec spec;
    spec.n_plates = config.n_plates;
    spec.wells_per_plate = config.wells_per_plate;
    spec.noise_sd = config.noise_sd;
    spec.seed = derive_seed(seed, 0);
    Rng params(derive_seed(seed, 1));
    const std::size_t wells = config.wells_per_plate;

    auto offsets = [&] {
        std::vector<double> o(spec.n_plates);
        for (auto& v : o) v = params.normal(0.0, config.offset_sd);
        return o;
    };
    auto phase = [&] { return 2.0 * std::numbers::pi * params.uniform(); };

    switch (id) {
        case 0: break;
        case 1: spec.batch_offsets = offsets(); break;
        case 2:
            for (std::size_t p = 1; p < spec.n_plates; p += 3) {
                spec.drifts.push_back(linear(p, (p % 2 == 0 ? -1.0 : 1.0) * config.slope));
            }
            break;
        case 3:
            for (std::size_t p = 0; p < spec.n_plates; p += 3) {
                spec.drifts.push_back(piecewise(p, wells, config.amplitude, p % 2 == 0 ? 1.0 : -1.0));
            }
            break;
        case 4: spec.drifts.push_back(sinusoid(std::min<std::size_t>(2, spec.n_plates - 1), config.amplitude, 0.0)); break;
        case 5:
            for (std::size_t p = 0; p < spec.n_plates; ++p) {
                spec.drifts.push_back(sinusoid(p, config.amplitude, phase()));
            }
            break;
        case 6:
            spec.batch_offsets = offsets();
            for (std::size_t p = 0; p < spec.n_plates; ++p) {
                switch (p % 4) {
                    case 0: spec.drifts.push_back(sinusoid(p, config.amplitude, phase())); break;
                    case 1: spec.drifts.push_back(piecewise(p, wells, config.amplitude, 1.0)); break;
                    case 2: spec.drifts.push_back(linear(p, -config.slope)); break;
                    default: break;
                }
            }
            break;
        default: break;
    }
    return spec;
}

ScenarioOutcome run_scenario(std::string_view name, std::uint64_t seed, const BenchmarkConfig& config) {
    ScenarioOutcome out;
    out.scenario = std::string(name);
    out.seed = seed;
    out.sim = generate(scenario_spec(name, seed, config));
    auto corrected = winnbeta_correct(out.sim.to_series(out.scenario), config.run);
    out.corrected = std::move(corrected.series.values);
    out.log = std::move(corrected.log);
    out.before = error_stats(out.sim.distorted, out.sim.truth);
    out.after = error_stats(out.corrected, out.sim.truth);
    out.centered_rmse_before = centered_rmse(out.sim.distorted, out.sim.truth, out.sim.plate_of);
    out.centered_rmse_after = centered_rmse(out.corrected, out.sim.truth, out.sim.plate_of);
    out.spearman_before = spearman(out.sim.distorted, out.sim.truth);
    out.spearman_after = spearman(out.corrected, out.sim.truth);
    return out;
}

BenchmarkReport benchmark_suite(const BenchmarkConfig& config) {
    std::vector<std::string> selected = config.scenarios.empty() ? scenario_names() : config.scenarios;
    for (const auto& name : selected) (void)scenario_id(name);

    BenchmarkReport report;
    report.outcomes.resize(selected.size());
    detail::parallel_for(selected.size(), resolve_workers(config.run), [&](std::size_t i) {
        const auto seed = derive_seed(config.master_seed, scenario_id(selected[i]));
        report.outcomes[i] = run_scenario(selected[i], seed, config);
    });
    return report;
}

std::vector<ReportRow> report_rows(const BenchmarkReport& report) {
    std::vector<ReportRow> rows;
    for (const auto& o : report.outcomes) {
        const auto& b = o.before;
        const auto& a = o.after;
        rows.push_back({o.scenario, "median", b.median, a.median});
        rows.push_back({o.scenario, "q1", b.q1, a.q1});
        rows.push_back({o.scenario, "q3", b.q3, a.q3});
        rows.push_back({o.scenario, "iqr", b.iqr, a.iqr});
        rows.push_back({o.scenario, "whisker_low", b.whisker_low, a.whisker_low});
        rows.push_back({o.scenario, "whisker_high", b.whisker_high, a.whisker_high});
        rows.push_back({o.scenario, "rmse", b.rmse, a.rmse});
        rows.push_back({o.scenario, "centered_rmse", o.centered_rmse_before, o.centered_rmse_after});
        rows.push_back({o.scenario, "spearman", o.spearman_before, o.spearman_after});
    }
    return rows;
}

QcStudy make_qc_study(const QcStudySpec& spec) {
    if (spec.qc_every < 2) throw ParameterError("qc_every must be at least 2");
    QcStudy out;
    auto& study = out.study;
    const std::size_t n = spec.n_plates * spec.wells_per_plate;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t position = i % spec.wells_per_plate;
        Well w;
        w.run_order = static_cast<int>(i + 1);
        w.plate = plate_label(i / spec.wells_per_plate);
        w.sample_type = (position % spec.qc_every == spec.qc_every - 1) ? SampleType::Qc
                                                                         : SampleType::Experimental;
        w.sample_id = (w.sample_type == SampleType::Qc ? "QC" : "S") + std::to_string(i + 1);
        study.wells.push_back(std::move(w));
    }
    study.intensities.assign(n, {});

    Rng params(derive_seed(spec.seed, 0));
    for (std::size_t m = 0; m < spec.n_metabolites; ++m) {
        DriftSpec d;
        d.n_plates = spec.n_plates;
        d.wells_per_plate = spec.wells_per_plate;
        d.noise_sd = spec.noise_sd;
        d.baseline = spec.baseline;
        d.seed = derive_seed(spec.seed, 1000 + m);
        const double scale = spec.noise_sd * (1.0 + params.uniform());
        switch (m % 4) {
            case 0: break;
            case 1:
                d.batch_offsets.resize(spec.n_plates);
                for (auto& o : d.batch_offsets) o = params.normal(0.0, scale);
                break;
            case 2:
                for (std::size_t p = 0; p < spec.n_plates; ++p) {
                    d.drifts.push_back(sinusoid(p, scale, 2.0 * std::numbers::pi * params.uniform()));
                }
                break;
            default:
                d.batch_offsets.resize(spec.n_plates);
                for (auto& o : d.batch_offsets) o = params.normal(0.0, 0.5 * scale);
                for (std::size_t p = 0; p < spec.n_plates; p += 2) {
                    d.drifts.push_back(piecewise(p, spec.wells_per_plate, scale, p % 4 == 0 ? 1.0 : -1.0));
                }
        }
        const auto distortion = distortion_of(d);
        Rng noise(d.seed);
        for (std::size_t i = 0; i < n; ++i) {
            const bool qc = study.wells[i].sample_type == SampleType::Qc;
            const double value = qc ? noise.normal(spec.baseline, spec.qc_noise_sd)
                                    : noise.normal(spec.baseline, spec.noise_sd);
            study.intensities[i].push_back(value + distortion[i]);
        }
        study.metabolite_names.push_back("M" + std::to_string(m + 1));
        out.specs.push_back(std::move(d));
    }
    return out;
}

}  // namespace winnbeta::sim
