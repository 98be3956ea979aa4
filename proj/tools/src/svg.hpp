// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

namespace winnbeta::cli::svg {

struct Curve {
    std::string label;
    std::string color;
    std::vector<double> x;
    std::vector<double> y;
};

/// Step curves on [0, 1] x [0, 1] with axes, ticks and a legend.
[[nodiscard]] std::string cdf_plot(const std::string& title, const std::string& x_label,
                                   const std::string& y_label, const std::vector<Curve>& curves);

struct Box {
    std::string label;
    double whisker_low = 0.0;
    double q1 = 0.0;
    double median = 0.0;
    double q3 = 0.0;
    double whisker_high = 0.0;
};

[[nodiscard]] std::string box_plot(const std::string& title, const std::string& y_label,
                                   const std::vector<Box>& boxes);

}  // namespace winnbeta::cli::svg
