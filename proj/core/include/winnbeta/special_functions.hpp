// SPDX-License-Identifier: Apache-2.0
#pragma once

namespace winnbeta::special {

/// Regularized upper incomplete gamma Q(a, x) = Gamma(a, x) / Gamma(a).
[[nodiscard]] double gamma_q(double a, double x);

/// Regularized incomplete beta I_x(a, b).
[[nodiscard]] double beta_inc(double a, double b, double x);

/// Inverse of the standard normal CDF (Wichura AS 241, ~1e-16 relative).
[[nodiscard]] double normal_quantile(double p);

}  // namespace winnbeta::special
