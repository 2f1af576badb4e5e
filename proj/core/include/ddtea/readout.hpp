// Linear readout: ridge-regression training, 0.5-threshold classification,
// and the two task metrics (per-sample accuracy, RMSE against the targets).
#pragma once

#include <iosfwd>
#include <span>
#include <stdexcept>
#include <vector>

#include "ddtea/reservoir.hpp"

namespace ddtea {

/// Ridge normal equations have no usable solution (rank-deficient at
/// lambda = 0, relative pivot threshold 1e-12).
struct singular_system_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ReadoutWeights {
    std::vector<double> w;  ///< one weight per feature column
};

struct Metrics {
    double accuracy = 0.0;  ///< fraction of matching per-sample classes
    double rmse = 0.0;      ///< sqrt(mean((prediction - target)^2))
};

/// Whether the last feature column is a constant bias term, which is
/// excluded from the regularization penalty.
enum class BiasColumn { None, Last };

/// Append a constant 1.0 column (the readout bias) to a feature matrix.
StateMatrix append_bias_column(const StateMatrix& m);

/// Default regularizer: 1e-6 * trace(X^T X) / cols.
double default_lambda(const StateMatrix& x);

/// Minimize ||X w - y||^2 + lambda * ||w_nobias||^2 via the normal
/// equations with an LDLT factorization. lambda must be >= 0.
ReadoutWeights train_ridge(const StateMatrix& x, std::span<const double> y, double lambda,
                           BiasColumn bias = BiasColumn::Last);

/// Predictions X w.
std::vector<double> predict(const ReadoutWeights& w, const StateMatrix& x);

/// Metrics of the predictions against {0,1} labels. A prediction is class 1
/// when it exceeds 0.5 (ties go to class 0).
Metrics evaluate(const ReadoutWeights& w, const StateMatrix& x, std::span<const int> labels);

/// Labels as regression targets (0.0 / 1.0).
std::vector<double> targets_from_labels(std::span<const int> labels);

/// Single-column CSV export, header "w".
void write_csv(const ReadoutWeights& w, std::ostream& os);

}  // namespace ddtea
