#include <doctest.h>

#include <cmath>
#include <sstream>

#include "ddtea/readout.hpp"
#include "ddtea/rng.hpp"
#include "test_support.hpp"

using namespace ddtea;
using test_support::rel_diff;

namespace {

StateMatrix matrix(std::size_t rows, std::size_t cols, std::initializer_list<double> values) {
    StateMatrix m(rows, cols);
    std::size_t i = 0;
    for (double v : values) m.data[i++] = v;
    return m;
}

double ridge_objective(const StateMatrix& x, std::span<const double> y,
                       std::span<const double> w, double lambda, BiasColumn bias) {
    double obj = 0.0;
    for (std::size_t r = 0; r < x.rows; ++r) {
        double p = 0.0;
        for (std::size_t c = 0; c < x.cols; ++c) p += x.at(r, c) * w[c];
        obj += (p - y[r]) * (p - y[r]);
    }
    for (std::size_t c = 0; c < x.cols; ++c) {
        if (bias == BiasColumn::Last && c == x.cols - 1) continue;
        obj += lambda * w[c] * w[c];
    }
    return obj;
}

}  // namespace

TEST_SUITE("readout") {

TEST_CASE("identity features interpolate exactly at lambda = 0") {
    const StateMatrix x = matrix(2, 2, {1.0, 0.0, 0.0, 1.0});
    const std::vector<double> y{1.0, 0.0};
    const ReadoutWeights w = train_ridge(x, y, 0.0, BiasColumn::None);
    CHECK(w.w[0] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(w.w[1] == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("scalar ridge shrinks toward 5/6") {
    // X = [1; 2], y = [1; 2], lambda = 1: w = X'y / (X'X + 1) = 5/6.
    const StateMatrix x = matrix(2, 1, {1.0, 2.0});
    const std::vector<double> y{1.0, 2.0};
    const ReadoutWeights w = train_ridge(x, y, 1.0, BiasColumn::None);
    REQUIRE(w.w.size() == 1);
    CHECK(w.w[0] == doctest::Approx(5.0 / 6.0).epsilon(1e-15));
}

TEST_CASE("a huge regularizer crushes the non-bias weights") {
    StateMatrix x(50, 3);
    std::vector<double> y(50);
    for (std::size_t r = 0; r < 50; ++r) {
        x.at(r, 0) = rng::uniform(1, 2 * r);
        x.at(r, 1) = rng::uniform(1, 2 * r + 1);
        x.at(r, 2) = 1.0;
        y[r] = (r % 2) ? 1.0 : 0.0;
    }
    const ReadoutWeights w = train_ridge(x, y, 1e9, BiasColumn::Last);
    CHECK(std::abs(w.w[0]) <= 1e-6);
    CHECK(std::abs(w.w[1]) <= 1e-6);
    // The unregularized bias is free to absorb the mean.
    CHECK(w.w[2] == doctest::Approx(0.5).epsilon(1e-3));
}

TEST_CASE("rank-deficient normal equations are reported at lambda = 0") {
    // Two identical columns.
    const StateMatrix x = matrix(3, 2, {1.0, 1.0, 2.0, 2.0, 3.0, 3.0});
    const std::vector<double> y{1.0, 2.0, 3.0};
    CHECK_THROWS_AS((void)train_ridge(x, y, 0.0, BiasColumn::None), singular_system_error);
    // A positive lambda regularizes the same system into solvability.
    CHECK_NOTHROW((void)train_ridge(x, y, 1e-6, BiasColumn::None));
}

TEST_CASE("trained weights sit at the minimum of the ridge objective") {
    StateMatrix x(40, 4);
    std::vector<double> y(40);
    for (std::size_t r = 0; r < 40; ++r) {
        for (std::size_t c = 0; c < 3; ++c) x.at(r, c) = rng::gaussian(3, 4 * r + c);
        x.at(r, 3) = 1.0;
        y[r] = (rng::uniform(4, r) > 0.5) ? 1.0 : 0.0;
    }
    const double lambda = 0.37;
    const ReadoutWeights w = train_ridge(x, y, lambda, BiasColumn::Last);
    const double at_min = ridge_objective(x, y, w.w, lambda, BiasColumn::Last);
    for (std::size_t c = 0; c < w.w.size(); ++c) {
        for (const double delta : {1e-4, -1e-4}) {
            std::vector<double> perturbed = w.w;
            perturbed[c] += delta;
            CHECK(ridge_objective(x, y, perturbed, lambda, BiasColumn::Last) >= at_min);
        }
    }
}

TEST_CASE("lambda = 0 on full-rank data is plain least squares") {
    StateMatrix x(30, 3);
    std::vector<double> y(30);
    for (std::size_t r = 0; r < 30; ++r) {
        for (std::size_t c = 0; c < 3; ++c) x.at(r, c) = rng::gaussian(8, 3 * r + c);
        y[r] = rng::gaussian(9, r);
    }
    const ReadoutWeights w = train_ridge(x, y, 0.0, BiasColumn::None);
    // Residual orthogonal to every column.
    for (std::size_t c = 0; c < 3; ++c) {
        double dot = 0.0;
        for (std::size_t r = 0; r < 30; ++r) {
            double p = 0.0;
            for (std::size_t cc = 0; cc < 3; ++cc) p += x.at(r, cc) * w.w[cc];
            dot += x.at(r, c) * (p - y[r]);
        }
        CHECK(std::abs(dot) < 1e-8);
    }
}

TEST_CASE("evaluate on exact and inverted predictions") {
    // Weights picking out a single feature column let us feed evaluate
    // arbitrary prediction vectors.
    const ReadoutWeights passthrough{{1.0}};

    const StateMatrix exact = matrix(4, 1, {0.0, 1.0, 1.0, 0.0});
    const std::vector<int> labels{0, 1, 1, 0};
    const Metrics m_exact = evaluate(passthrough, exact, labels);
    CHECK(m_exact.accuracy == 1.0);
    CHECK(m_exact.rmse == 0.0);

    const StateMatrix inverted = matrix(4, 1, {1.0, 0.0, 0.0, 1.0});
    const Metrics m_inv = evaluate(passthrough, inverted, labels);
    CHECK(m_inv.accuracy == 0.0);
    CHECK(m_inv.rmse == 1.0);
}

TEST_CASE("evaluate mixed example") {
    const ReadoutWeights passthrough{{1.0}};
    const StateMatrix x = matrix(2, 1, {0.6, 0.4});
    const std::vector<int> labels{1, 1};
    const Metrics m = evaluate(passthrough, x, labels);
    CHECK(m.accuracy == 0.5);
    CHECK(m.rmse == doctest::Approx(0.50990195135927845).epsilon(1e-15));  // sqrt(0.26)
}

TEST_CASE("threshold tie at exactly 0.5 goes to class 0") {
    const ReadoutWeights passthrough{{1.0}};
    const StateMatrix x = matrix(2, 1, {0.5, 0.5000001});
    const std::vector<int> labels{0, 1};
    CHECK(evaluate(passthrough, x, labels).accuracy == 1.0);
}

TEST_CASE("evaluate is invariant under joint row permutation") {
    StateMatrix x(20, 2);
    std::vector<int> labels(20);
    for (std::size_t r = 0; r < 20; ++r) {
        x.at(r, 0) = rng::uniform(11, 2 * r);
        x.at(r, 1) = rng::uniform(11, 2 * r + 1);
        labels[r] = static_cast<int>(rng::at(12, r) & 1u);
    }
    const ReadoutWeights w{{0.7, 0.3}};
    const Metrics base = evaluate(w, x, labels);

    // Reverse is a permutation.
    StateMatrix rx(20, 2);
    std::vector<int> rlabels(20);
    for (std::size_t r = 0; r < 20; ++r) {
        rx.at(r, 0) = x.at(19 - r, 0);
        rx.at(r, 1) = x.at(19 - r, 1);
        rlabels[r] = labels[19 - r];
    }
    const Metrics permuted = evaluate(w, rx, rlabels);
    CHECK(base.accuracy == permuted.accuracy);
    CHECK(base.rmse == doctest::Approx(permuted.rmse).epsilon(1e-15));
}

TEST_CASE("random balanced predictions score one half") {
    const std::size_t n = 10000;
    StateMatrix x(n, 1);
    std::vector<int> labels(n);
    for (std::size_t r = 0; r < n; ++r) {
        x.at(r, 0) = rng::uniform(21, r);              // uniform (0,1) prediction
        labels[r] = static_cast<int>(rng::at(22, r) & 1u);  // independent labels
    }
    const Metrics m = evaluate(ReadoutWeights{{1.0}}, x, labels);
    CHECK(m.accuracy > 0.45);
    CHECK(m.accuracy < 0.55);
}

TEST_CASE("shape mismatches are rejected") {
    const StateMatrix x = matrix(2, 2, {1.0, 0.0, 0.0, 1.0});
    const std::vector<double> y3{1.0, 0.0, 0.0};
    CHECK_THROWS_AS((void)train_ridge(x, y3, 0.0, BiasColumn::None), std::invalid_argument);
    const std::vector<int> labels{0};
    CHECK_THROWS_AS((void)evaluate(ReadoutWeights{{1.0, 1.0}}, x, labels), std::invalid_argument);
    CHECK_THROWS_AS((void)predict(ReadoutWeights{{1.0}}, x), std::invalid_argument);
    CHECK_THROWS_AS((void)train_ridge(x, y3, -1.0, BiasColumn::None), std::invalid_argument);
}

TEST_CASE("bias append and default lambda") {
    const StateMatrix x = matrix(2, 2, {1.0, 2.0, 3.0, 4.0});
    const StateMatrix xb = append_bias_column(x);
    CHECK(xb.cols == 3);
    CHECK(xb.at(0, 2) == 1.0);
    CHECK(xb.at(1, 2) == 1.0);
    CHECK(xb.at(1, 1) == 4.0);
    // trace(X'X) = 1+4+9+16 = 30; 1e-6 * 30 / 2.
    CHECK(default_lambda(x) == doctest::Approx(15e-6).epsilon(1e-12));
}

TEST_CASE("weights CSV") {
    std::ostringstream os;
    write_csv(ReadoutWeights{{0.5, -1.0}}, os);
    CHECK(os.str() == "w\n0.5\n-1\n");
}

}  // TEST_SUITE
