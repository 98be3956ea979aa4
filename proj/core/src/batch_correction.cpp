// SPDX-License-Identifier: Apache-2.0
#include "winnbeta/batch_correction.hpp"

#include "winnbeta/descriptive.hpp"
#include "winnbeta/errors.hpp"

namespace winnbeta {

GroupedSample group_by_plate(const MetaboliteSeries& series) {
    GroupedSample sample;
    for (const auto& plate : partition_by_plate(series)) {
        Group g{plate.plate, {}};
        g.values.reserve(plate.indices.size());
        for (auto i : plate.indices) g.values.push_back(series.values[i]);
        sample.push_back(std::move(g));
    }
    return sample;
}

BatchResult variance_normalize(const MetaboliteSeries& series, double alpha, VarianceTest test) {
    series.validate();
    BatchResult result{series, {}};
    const auto sample = group_by_plate(series);
    if (sample.size() < 2) {
        result.state.flags.emplace_back("variance:single_plate");
        return result;
    }
    for (const auto& g : sample) {
        if (g.values.size() < 2) {
            throw GroupSizeError("plate '" + g.label + "' has fewer than two values");
        }
        result.state.plate_sds[g.label] = sample_sd(g.values);
    }

    switch (test) {
        case VarianceTest::Fligner: result.state.variance_test = fligner_killeen(sample); break;
        case VarianceTest::LeveneMedian:
            result.state.variance_test = levene(sample, LeveneCenter::Median);
            break;
        case VarianceTest::LeveneMean:
            result.state.variance_test = levene(sample, LeveneCenter::Mean);
            break;
    }
    if (result.state.variance_test->p_value >= alpha) return result;

    for (const auto& [plate, sd] : result.state.plate_sds) {
        if (!(sd > 0.0)) {
            throw DegeneratePlateError(plate, "plate '" + plate +
                                                  "' has zero standard deviation; cannot "
                                                  "variance-normalize");
        }
    }
    for (std::size_t i = 0; i < result.series.values.size(); ++i) {
        result.series.values[i] /= result.state.plate_sds.at(result.series.plate_of[i]);
    }
    result.state.variance_normalized = true;
    return result;
}

BatchResult residualize_by_plate(const MetaboliteSeries& series, double alpha) {
    series.validate();
    BatchResult result{series, {}};
    const auto sample = group_by_plate(series);
    if (sample.size() < 2) {
        result.state.flags.emplace_back("resid:single_plate");
        return result;
    }
    for (const auto& g : sample) result.state.plate_means[g.label] = mean(g.values);

    try {
        result.state.mean_test = anova_oneway(sample);
    } catch (const DegenerateError&) {
        result.state.flags.emplace_back("resid:anova_degenerate");
        return result;
    }
    if (result.state.mean_test->degenerate) result.state.flags.emplace_back("resid:zero_within_spread");
    if (result.state.mean_test->p_value >= alpha) return result;

    for (std::size_t i = 0; i < result.series.values.size(); ++i) {
        result.series.values[i] -= result.state.plate_means.at(result.series.plate_of[i]);
    }
    result.state.residualized = true;
    return result;
}

BatchResult phase1(const MetaboliteSeries& series, double alpha, VarianceTest test) {
    BatchState state;
    MetaboliteSeries normalized = series;
    try {
        auto vn = variance_normalize(series, alpha, test);
        normalized = std::move(vn.series);
        state = std::move(vn.state);
    } catch (const DegeneratePlateError& e) {
        state.flags.push_back("variance:degenerate_plate:" + e.plate());
    } catch (const DegenerateError&) {
        state.flags.emplace_back("variance:test_degenerate");
    }

    auto rz = residualize_by_plate(normalized, alpha);
    state.residualized = rz.state.residualized;
    state.mean_test = rz.state.mean_test;
    state.plate_means = std::move(rz.state.plate_means);
    state.flags.insert(state.flags.end(), rz.state.flags.begin(), rz.state.flags.end());
    return BatchResult{std::move(rz.series), std::move(state)};
}

}  // namespace winnbeta
