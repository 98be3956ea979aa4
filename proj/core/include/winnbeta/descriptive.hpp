// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstddef>
#include <span>

namespace winnbeta {

[[nodiscard]] inline double mean(std::span<const double> xs) {
    double sum = 0.0;
    for (double x : xs) sum += x;
    return sum / static_cast<double>(xs.size());
}

/// Sample variance with the n-1 denominator; two-pass for stability.
[[nodiscard]] inline double sample_variance(std::span<const double> xs) {
    const double m = mean(xs);
    double ss = 0.0;
    for (double x : xs) ss += (x - m) * (x - m);
    return ss / static_cast<double>(xs.size() - 1);
}

[[nodiscard]] inline double sample_sd(std::span<const double> xs) {
    return std::sqrt(sample_variance(xs));
}

}  // namespace winnbeta
