// SPDX-License-Identifier: Apache-2.0
#include "winnbeta/qc_evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "winnbeta/descriptive.hpp"
#include "winnbeta/errors.hpp"
#include "winnbeta/stats_tests.hpp"

namespace winnbeta {

double cv(std::span<const double> values) {
    if (values.size() < 2) throw ParameterError("cv needs at least two values");
    const double m = mean(values);
    if (!(m > 0.0)) throw DomainError("cv is undefined for a nonpositive mean");
    return sample_sd(values) / m;
}

QcRescale rescale_qc(std::span<const double> qc, double experimental_mean) {
    if (qc.size() < 2) throw ParameterError("rescale_qc needs at least two QC values");
    const double qc_mean = mean(qc);
    const double qc_sd = sample_sd(qc);
    if (!(qc_mean > 0.0)) throw DomainError("rescale_qc: QC mean must be positive");
    if (!(experimental_mean > 0.0)) throw DomainError("rescale_qc: experimental mean must be positive");
    if (!(qc_sd > 0.0)) throw DomainError("rescale_qc: QC standard deviation is zero");

    QcRescale out;
    out.a = (qc_sd / qc_mean) * experimental_mean / qc_sd;
    out.b = experimental_mean - out.a * qc_mean;
    out.values.reserve(qc.size());
    for (double v : qc) out.values.push_back(out.a * v + out.b);
    return out;
}

std::vector<double> restore_scale(std::span<const double> y_winn, double orig_mean, double orig_sd) {
    if (y_winn.size() < 2) throw ParameterError("restore_scale needs at least two values");
    const double m = mean(y_winn);
    const double sd = sample_sd(y_winn);
    if (!(sd > 0.0)) throw DegenerateError("restore_scale: corrected series has zero SD");
    std::vector<double> z;
    z.reserve(y_winn.size());
    for (double v : y_winn) z.push_back((v - m) * orig_sd / sd + orig_mean);
    return z;
}

std::vector<double> restore_scale_literal(std::span<const double> y_winn,
                                          std::span<const double> y_orig) {
    if (y_winn.size() < 2 || y_orig.size() < 2) {
        throw ParameterError("restore_scale_literal needs at least two values");
    }
    const double sd = sample_sd(y_winn);
    if (!(sd > 0.0)) throw DegenerateError("restore_scale_literal: corrected series has zero SD");
    const double shift = mean(y_orig) - mean(y_winn);
    const double scale = sample_sd(y_orig) / sd;
    std::vector<double> z;
    z.reserve(y_winn.size());
    for (double v : y_winn) z.push_back((v + shift) * scale);
    return z;
}

std::vector<double> correction_ratio(std::span<const double> z, std::span<const double> y_orig) {
    if (z.size() != y_orig.size()) throw ParameterError("correction_ratio: length mismatch");
    const double floor = y_orig.size() >= 2 ? 1e-9 * sample_sd(y_orig) : 0.0;
    std::vector<double> ratio(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) {
        const double y = y_orig[i];
        ratio[i] = (y == 0.0 || std::abs(y) < floor) ? std::numeric_limits<double>::quiet_NaN()
                                                     : z[i] / y;
    }
    return ratio;
}

QcCorrection apply_qc_correction(std::span<const int> qc_orders, std::span<const int> exp_orders,
                                 std::span<const double> ratio,
                                 std::span<const double> qc_rescaled) {
    if (exp_orders.size() != ratio.size()) {
        throw ParameterError("apply_qc_correction: ratio and experimental wells differ in length");
    }
    if (qc_orders.size() != qc_rescaled.size()) {
        throw ParameterError("apply_qc_correction: QC orders and values differ in length");
    }
    std::vector<int> orders;
    std::vector<double> r;
    for (std::size_t i = 0; i < exp_orders.size(); ++i) {
        if (i && exp_orders[i] <= exp_orders[i - 1]) {
            throw ParameterError("apply_qc_correction: experimental run orders must increase");
        }
        if (std::isnan(ratio[i])) continue;
        orders.push_back(exp_orders[i]);
        r.push_back(ratio[i]);
    }
    if (orders.size() < 2) {
        throw ParameterError("apply_qc_correction needs at least two usable experimental wells");
    }

    QcCorrection out;
    out.values.reserve(qc_orders.size());
    out.interpolated.reserve(qc_orders.size());
    for (std::size_t q = 0; q < qc_orders.size(); ++q) {
        const int order = qc_orders[q];
        double value;
        if (order <= orders.front()) {
            value = r.front();
            if (order < orders.front()) ++out.clamped;
        } else if (order >= orders.back()) {
            value = r.back();
            if (order > orders.back()) ++out.clamped;
        } else {
            const auto hi = static_cast<std::size_t>(
                std::lower_bound(orders.begin(), orders.end(), order) - orders.begin());
            if (orders[hi] == order) {
                value = r[hi];
            } else {
                const auto lo = hi - 1;
                const double w = static_cast<double>(order - orders[lo]) /
                                 static_cast<double>(orders[hi] - orders[lo]);
                value = r[lo] + w * (r[hi] - r[lo]);
            }
        }
        out.interpolated.push_back(value);
        out.values.push_back(value * qc_rescaled[q]);
    }
    return out;
}

QcTransfer transfer_correction(std::span<const double> qc, std::span<const int> qc_orders,
                               std::span<const double> exp_original,
                               std::span<const double> exp_corrected,
                               std::span<const int> exp_orders, bool literal_zm) {
    if (exp_original.size() != exp_corrected.size() || exp_original.size() != exp_orders.size()) {
        throw ParameterError("transfer_correction: experimental arrays differ in length");
    }
    QcTransfer t;
    auto rescaled = rescale_qc(qc, mean(exp_original));
    t.a = rescaled.a;
    t.b = rescaled.b;
    t.qc_rescaled = std::move(rescaled.values);

    if (std::equal(exp_original.begin(), exp_original.end(), exp_corrected.begin())) {
        // Nothing was corrected: z = y exactly, so every ratio is exactly 1.
        t.z.assign(exp_original.begin(), exp_original.end());
    } else if (literal_zm) {
        t.z = restore_scale_literal(exp_corrected, exp_original);
    } else {
        t.z = restore_scale(exp_corrected, mean(exp_original), sample_sd(exp_original));
    }
    t.ratio = correction_ratio(t.z, exp_original);
    t.excluded_ratios = static_cast<std::size_t>(
        std::count_if(t.ratio.begin(), t.ratio.end(), [](double v) { return std::isnan(v); }));
    auto applied = apply_qc_correction(qc_orders, exp_orders, t.ratio, t.qc_rescaled);
    t.qc_corrected = std::move(applied.values);
    t.clamped = applied.clamped;
    return t;
}

CvEvaluation cv_report(const StudyMatrix& original, const StudyMatrix& corrected, bool literal_zm,
                       double threshold) {
    if (original.count(SampleType::Qc) == 0) {
        throw ParameterError("study has no QC wells; CV evaluation needs them");
    }
    if (original.wells != corrected.wells || original.metabolite_names != corrected.metabolite_names) {
        throw ParameterError("original and corrected studies do not share wells and metabolites");
    }

    CvEvaluation eval;
    eval.summary.threshold = threshold;
    std::vector<double> before;
    std::vector<double> after;

    for (std::size_t c = 0; c < original.n_metabolites(); ++c) {
        CvReport report;
        report.metabolite = original.metabolite_names[c];
        std::vector<double> qc, exp_orig, exp_corr;
        std::vector<int> qc_orders, exp_orders;
        for (std::size_t r = 0; r < original.n_wells(); ++r) {
            const auto& raw = original.intensities[r][c];
            const auto& cor = corrected.intensities[r][c];
            const auto& well = original.wells[r];
            if (well.sample_type == SampleType::Qc) {
                if (!raw) continue;
                qc.push_back(*raw);
                qc_orders.push_back(well.run_order);
            } else {
                if (!raw || !cor) continue;
                exp_orig.push_back(*raw);
                exp_corr.push_back(*cor);
                exp_orders.push_back(well.run_order);
            }
        }
        report.n_qc = qc.size();
        try {
            if (qc.size() < 2) throw ParameterError("fewer than two QC values");
            if (!(mean(qc) > 0.0)) throw DomainError("nonpositive QC mean");
            report.cv_before = cv(qc);
            const auto t =
                transfer_correction(qc, qc_orders, exp_orig, exp_corr, exp_orders, literal_zm);
            if (t.excluded_ratios) report.flags.push_back("ratio_excluded:" + std::to_string(t.excluded_ratios));
            if (t.clamped) report.flags.push_back("clamped:" + std::to_string(t.clamped));
            report.cv_after = cv(t.qc_corrected);
        } catch (const Error& e) {
            report.valid = false;
            report.flags.push_back(std::string("invalid:") + e.what());
        }
        if (report.valid) {
            ++eval.summary.n_valid;
            before.push_back(report.cv_before);
            after.push_back(report.cv_after);
            if (report.cv_before < threshold) ++eval.summary.below_before;
            if (report.cv_after < threshold) ++eval.summary.below_after;
        } else {
            ++eval.summary.n_invalid;
        }
        eval.reports.push_back(std::move(report));
    }

    const double n = static_cast<double>(before.size());
    for (int i = 0; i <= 100; ++i) {
        CdfRow row;
        row.threshold = i / 100.0;
        if (n > 0) {
            row.frac_before = static_cast<double>(std::count_if(
                                  before.begin(), before.end(),
                                  [&](double v) { return v <= row.threshold; })) / n;
            row.frac_after = static_cast<double>(std::count_if(
                                 after.begin(), after.end(),
                                 [&](double v) { return v <= row.threshold; })) / n;
        }
        eval.summary.cdf.push_back(row);
    }
    return eval;
}

double spearman(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw ParameterError("spearman: length mismatch");
    if (x.size() < 3) throw ParameterError("spearman needs at least three pairs");
    const auto rx = midranks(x);
    const auto ry = midranks(y);
    const double mx = mean(rx);
    const double my = mean(ry);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < rx.size(); ++i) {
        sxy += (rx[i] - mx) * (ry[i] - my);
        sxx += (rx[i] - mx) * (rx[i] - mx);
        syy += (ry[i] - my) * (ry[i] - my);
    }
    if (!(sxx > 0.0) || !(syy > 0.0)) throw DegenerateError("spearman: zero rank variance");
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

}  // namespace winnbeta
