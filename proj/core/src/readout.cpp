#include "ddtea/readout.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <ostream>

#include "ddtea/csv.hpp"

namespace ddtea {

namespace {

Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>
as_eigen(const StateMatrix& m) {
    return {m.data.data(), static_cast<Eigen::Index>(m.rows), static_cast<Eigen::Index>(m.cols)};
}

}  // namespace

StateMatrix append_bias_column(const StateMatrix& m) {
    StateMatrix out(m.rows, m.cols + 1);
    for (std::size_t r = 0; r < m.rows; ++r) {
        for (std::size_t c = 0; c < m.cols; ++c) {
            out.at(r, c) = m.at(r, c);
        }
        out.at(r, m.cols) = 1.0;
    }
    return out;
}

double default_lambda(const StateMatrix& x) {
    double trace = 0.0;
    for (std::size_t r = 0; r < x.rows; ++r) {
        for (std::size_t c = 0; c < x.cols; ++c) {
            trace += x.at(r, c) * x.at(r, c);
        }
    }
    return 1e-6 * trace / static_cast<double>(x.cols);
}

ReadoutWeights train_ridge(const StateMatrix& x, std::span<const double> y, double lambda,
                           BiasColumn bias) {
    if (x.rows == 0 || x.cols == 0) {
        throw std::invalid_argument("train_ridge: empty feature matrix");
    }
    if (y.size() != x.rows) {
        throw std::invalid_argument("train_ridge: target length does not match rows");
    }
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
        throw std::invalid_argument("train_ridge: lambda must be finite and >= 0");
    }

    const auto X = as_eigen(x);
    const Eigen::Map<const Eigen::VectorXd> Y(y.data(), static_cast<Eigen::Index>(y.size()));
    const auto rows = static_cast<Eigen::Index>(x.rows);
    const auto cols = static_cast<Eigen::Index>(x.cols);

    // The ridge minimizer solved in its augmented least-squares form
    //
    //     min || [X; sqrt(lambda)*P] w - [y; 0] ||^2,  P = I without the
    //                                                  bias row
    //
    // via column-pivoted QR. Reservoir feature matrices are extremely ill
    // conditioned (many near-duplicate columns); forming X^T X would square
    // that conditioning and lose the informative directions in double
    // precision, so the factorization works on X itself.
    const Eigen::Index penalized = bias == BiasColumn::Last ? cols - 1 : cols;
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(rows + penalized, cols);
    A.topRows(rows) = X;
    const double sqrt_lambda = std::sqrt(lambda);
    for (Eigen::Index c = 0; c < penalized; ++c) {
        A(rows + c, c) = sqrt_lambda;
    }
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(rows + penalized);
    rhs.head(rows) = Y;

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
    if (lambda == 0.0) {
        // Rank check mirrors a relative pivot threshold of 1e-12 on the
        // normal equations (pivots there are the squares of these).
        qr.setThreshold(1e-6);
        if (qr.rank() < cols) {
            throw singular_system_error(
                "train_ridge: feature matrix rank-deficient at lambda = 0 (rank " +
                std::to_string(qr.rank()) + " of " + std::to_string(cols) + ")");
        }
    }
    const Eigen::VectorXd w = qr.solve(rhs);
    return ReadoutWeights{std::vector<double>(w.data(), w.data() + w.size())};
}

std::vector<double> predict(const ReadoutWeights& w, const StateMatrix& x) {
    if (w.w.size() != x.cols) {
        throw std::invalid_argument("predict: weight length does not match feature columns");
    }
    std::vector<double> p(x.rows, 0.0);
    for (std::size_t r = 0; r < x.rows; ++r) {
        double acc = 0.0;
        for (std::size_t c = 0; c < x.cols; ++c) {
            acc += x.at(r, c) * w.w[c];
        }
        p[r] = acc;
    }
    return p;
}

Metrics evaluate(const ReadoutWeights& w, const StateMatrix& x, std::span<const int> labels) {
    if (labels.size() != x.rows) {
        throw std::invalid_argument("evaluate: label length does not match rows");
    }
    if (x.rows == 0) {
        throw std::invalid_argument("evaluate: empty evaluation set");
    }
    const std::vector<double> p = predict(w, x);

    double sq = 0.0;
    std::size_t hits = 0;
    for (std::size_t r = 0; r < x.rows; ++r) {
        const double err = p[r] - static_cast<double>(labels[r]);
        sq += err * err;
        const int cls = p[r] > 0.5 ? 1 : 0;
        hits += static_cast<std::size_t>(cls == labels[r]);
    }
    return Metrics{.accuracy = static_cast<double>(hits) / static_cast<double>(x.rows),
                   .rmse = std::sqrt(sq / static_cast<double>(x.rows))};
}

std::vector<double> targets_from_labels(std::span<const int> labels) {
    std::vector<double> t(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i) {
        t[i] = static_cast<double>(labels[i]);
    }
    return t;
}

void write_csv(const ReadoutWeights& w, std::ostream& os) {
    os << "w\n";
    for (double v : w.w) {
        os << fmt_g17(v) << '\n';
    }
}

}  // namespace ddtea
