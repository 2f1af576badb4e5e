// Generalized-logistic (Richards) curve fitting for sweep summaries.
//
//     y(x) = A + (K - A) / (1 + exp(-B*(x - M)))^(1/nu)
//
// Fitted by Nelder-Mead on the sum of squared errors from five data-driven
// starting points.
#pragma once

#include <span>

namespace ddtea {

struct LogisticFit {
    double A = 0.0;   ///< lower asymptote
    double K = 1.0;   ///< upper asymptote
    double B = 0.0;   ///< growth rate per axis unit
    double M = 0.0;   ///< inflection location
    double nu = 1.0;  ///< asymmetry shape, > 0
    double r_squared = 0.0;
    bool degenerate = false;  ///< constant input data, A = K = that constant

    /// Evaluate the fitted curve; overflow-safe for any B*(x - M).
    [[nodiscard]] double operator()(double x) const;
};

/// Fit a Richards curve to (x, y). Requires >= 6 points and strictly
/// increasing x. A y-range below 1e-12 short-circuits to the degenerate
/// constant fit with r_squared = 1.
LogisticFit fit_logistic(std::span<const double> x, std::span<const double> y);

/// Sum of squared residuals of a fit against data (diagnostics and tests).
double sse(const LogisticFit& fit, std::span<const double> x, std::span<const double> y);

}  // namespace ddtea
