// SPDX-License-Identifier: Apache-2.0
#include "winnbeta/detrending.hpp"

#include <Eigen/Dense>
#include <algorithm>

#include "winnbeta/errors.hpp"

namespace winnbeta {

namespace {

// Cox-de Boor recursion for all order-4 B-splines on a clamped knot vector.
std::vector<double> cubic_bspline_row(double t, const std::vector<double>& knots, int n_basis) {
    constexpr int kOrder = 4;
    const int n_knots = static_cast<int>(knots.size());
    std::vector<double> b(static_cast<std::size_t>(n_knots - 1), 0.0);

    // Locate the span; the right boundary belongs to the last nonempty span.
    int span = kOrder - 1;
    while (span < n_knots - kOrder - 1 && t >= knots[static_cast<std::size_t>(span + 1)]) ++span;
    b[static_cast<std::size_t>(span)] = 1.0;

    for (int k = 2; k <= kOrder; ++k) {
        for (int i = 0; i < n_knots - k; ++i) {
            const auto ui = static_cast<std::size_t>(i);
            double value = 0.0;
            const double left_den = knots[ui + k - 1] - knots[ui];
            if (left_den > 0.0) value += (t - knots[ui]) / left_den * b[ui];
            const double right_den = knots[ui + k] - knots[ui + 1];
            if (right_den > 0.0) value += (knots[ui + k] - t) / right_den * b[ui + 1];
            b[ui] = value;
        }
    }
    b.resize(static_cast<std::size_t>(n_basis));
    return b;
}

}  // namespace

std::vector<double> spline_design(std::size_t n, int df, std::vector<double>* knots) {
    if (df < 1) throw ParameterError("spline df must be at least 1");
    if (n < 2) throw ParameterError("spline design needs at least two positions");
    const auto cols = static_cast<std::size_t>(df);
    std::vector<double> x(n * cols);
    const double span = static_cast<double>(n - 1);
    if (knots) knots->clear();

    if (df <= 3) {
        for (std::size_t i = 0; i < n; ++i) {
            const double t = static_cast<double>(i) / span;
            double power = 1.0;
            for (std::size_t j = 0; j < cols; ++j) {
                x[i * cols + j] = power;
                power *= t;
            }
        }
        return x;
    }

    const int interior = df - 4;
    std::vector<double> knot_vector(4, 0.0);
    for (int j = 1; j <= interior; ++j) {
        const double t = static_cast<double>(j) / static_cast<double>(interior + 1);
        knot_vector.push_back(t);
        if (knots) knots->push_back(1.0 + t * span);
    }
    knot_vector.insert(knot_vector.end(), 4, 1.0);

    for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) / span;
        const auto row = cubic_bspline_row(t, knot_vector, df);
        std::copy(row.begin(), row.end(), x.begin() + static_cast<std::ptrdiff_t>(i * cols));
    }
    return x;
}

SplineFit fit_spline(std::span<const double> segment, int df) {
    const std::size_t n = segment.size();
    if (df < 1) throw ParameterError("spline df must be at least 1");
    if (n < static_cast<std::size_t>(df) + 2) {
        throw ParameterError("fit_spline needs n >= df + 2 (n=" + std::to_string(n) +
                             ", df=" + std::to_string(df) + ")");
    }
    SplineFit fit;
    fit.df = df;
    const auto design = spline_design(n, df, &fit.knots);

    using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    const Eigen::Map<const RowMatrix> x(design.data(), static_cast<Eigen::Index>(n), df);
    const Eigen::Map<const Eigen::VectorXd> y(segment.data(), static_cast<Eigen::Index>(n));

    const Eigen::ColPivHouseholderQR<RowMatrix> qr(x);
    if (qr.rank() < df) {
        throw FitError("spline design with df=" + std::to_string(df) + " is rank deficient (rank " +
                       std::to_string(qr.rank()) + ")");
    }
    const Eigen::VectorXd beta = qr.solve(y);
    const Eigen::VectorXd fitted = x * beta;
    fit.coefficients.assign(beta.data(), beta.data() + beta.size());
    fit.fitted.assign(fitted.data(), fitted.data() + fitted.size());
    return fit;
}

std::vector<int> default_df_grid(std::size_t n, int max_df) {
    std::vector<int> grid;
    const auto cap = std::min<std::size_t>(static_cast<std::size_t>(std::max(max_df, 1)), n / 4);
    for (std::size_t df = 1; df <= std::max<std::size_t>(cap, 1); ++df) {
        if (df + 2 <= n) grid.push_back(static_cast<int>(df));
    }
    return grid;
}

DfTuning tune_df(std::span<const double> segment, std::span<const int> df_grid, std::size_t lags) {
    if (df_grid.empty()) throw ParameterError("tune_df: empty df grid");
    std::vector<int> grid(df_grid.begin(), df_grid.end());
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

    DfTuning tuning;
    std::vector<double> residual(segment.size());
    for (int df : grid) {
        try {
            const auto fit = fit_spline(segment, df);
            for (std::size_t i = 0; i < segment.size(); ++i) residual[i] = segment[i] - fit.fitted[i];
            const auto wn = ljung_box(residual, lags);
            tuning.profile.push_back({df, wn.statistic, wn.p_value});
        } catch (const FitError&) {
        } catch (const DegenerateError&) {
        }
    }
    if (tuning.profile.empty()) throw FitError("tune_df: no df in the grid produced a usable fit");

    const DfProfileEntry* best = &tuning.profile.front();
    for (const auto& entry : tuning.profile) {
        if (entry.p_value > best->p_value) best = &entry;
    }
    tuning.best_df = best->df;
    return tuning;
}

std::size_t Phase2Result::plates_detrended() const {
    return static_cast<std::size_t>(std::count_if(decisions.begin(), decisions.end(),
                                                  [](const auto& d) { return d.detrended; }));
}

std::size_t lags_for(std::size_t n, const RunConfig& config) {
    if (config.lags) return std::min(*config.lags, n > 1 ? n - 1 : 1);
    return default_lags(n);
}

Phase2Result phase2(const MetaboliteSeries& series, const RunConfig& config) {
    series.validate();
    Phase2Result result{series, std::nullopt, {}, {}};

    bool gate_open = true;
    if (series.size() >= 3) {
        try {
            result.study_wn = ljung_box(series.values, lags_for(series.size(), config));
        } catch (const DegenerateError&) {
            result.flags.emplace_back("wn:study_degenerate");
        }
    }
    if (config.study_wn_gate) {
        gate_open = result.study_wn && result.study_wn->p_value < config.alpha;
        if (!gate_open) result.flags.emplace_back("wn:study_pass");
    }

    for (const auto& plate : partition_by_plate(series)) {
        DetrendDecision decision;
        decision.plate = plate.plate;
        decision.n = plate.indices.size();
        if (decision.n < config.min_batch_size) {
            decision.flags.push_back("short_plate");
            result.decisions.push_back(std::move(decision));
            continue;
        }
        std::vector<double> segment;
        segment.reserve(decision.n);
        for (auto i : plate.indices) segment.push_back(series.values[i]);
        const auto lags = lags_for(decision.n, config);

        try {
            decision.wn_before = ljung_box(segment, lags);
        } catch (const DegenerateError&) {
            decision.flags.push_back("plate_degenerate");
            result.decisions.push_back(std::move(decision));
            continue;
        }
        if (!gate_open || decision.wn_before->p_value >= config.alpha) {
            result.decisions.push_back(std::move(decision));
            continue;
        }

        const auto grid = default_df_grid(decision.n, config.max_df);
        const auto tuning = tune_df(segment, grid, lags);
        decision.df_profile = tuning.profile;
        if (tuning.best_df == 1) {
            // A constant trend is no trend: the plate stays as it is.
            decision.chosen_df = 1;
            decision.flags.push_back("no_trend_found");
            result.decisions.push_back(std::move(decision));
            continue;
        }
        const auto fit = fit_spline(segment, tuning.best_df);
        std::vector<double> detrended(segment.size());
        for (std::size_t k = 0; k < segment.size(); ++k) {
            detrended[k] = segment[k] - fit.fitted[k];
            result.series.values[plate.indices[k]] = detrended[k];
        }
        decision.detrended = true;
        decision.chosen_df = tuning.best_df;
        try {
            decision.wn_after = ljung_box(detrended, lags);
            if (decision.wn_after->p_value < config.alpha) decision.flags.push_back("still_not_wn");
        } catch (const DegenerateError&) {
            decision.flags.push_back("after_degenerate");
        }
        result.decisions.push_back(std::move(decision));
    }
    return result;
}

}  // namespace winnbeta
