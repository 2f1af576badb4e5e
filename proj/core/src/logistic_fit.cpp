#include "ddtea/logistic_fit.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

namespace ddtea {

namespace {

constexpr double kDegenerateRange = 1e-12;

// log(1 + exp(z)) without overflow.
double softplus(double z) {
    if (z > 0.0) {
        return z + std::log1p(std::exp(-z));
    }
    return std::log1p(std::exp(z));
}

double richards(double A, double K, double B, double M, double nu, double x) {
    const double z = -B * (x - M);
    return A + (K - A) * std::exp(-softplus(z) / nu);
}

// Parameter vector is (A, K, B, M, log nu).
double objective(std::span<const double> th, std::span<const double> x,
                 std::span<const double> y) {
    if (std::abs(th[4]) > 20.0) {
        return std::numeric_limits<double>::max();  // nu out of useful range
    }
    const double nu = std::exp(th[4]);
    double acc = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = richards(th[0], th[1], th[2], th[3], nu, x[i]) - y[i];
        acc += r * r;
    }
    return std::isfinite(acc) ? acc : std::numeric_limits<double>::max();
}

using Objective = std::function<double(std::span<const double>)>;

// Standard Nelder-Mead (reflection 1, expansion 2, contraction 0.5,
// shrink 0.5) on a simplex seeded around `start` with per-coordinate steps.
void nelder_mead(const Objective& f, std::vector<double>& start, double& f_best,
                 std::span<const double> steps, int max_iter) {
    const std::size_t dim = start.size();
    std::vector<std::vector<double>> v(dim + 1, start);
    std::vector<double> fv(dim + 1);
    for (std::size_t i = 0; i < dim; ++i) {
        v[i + 1][i] += steps[i];
    }
    for (std::size_t i = 0; i <= dim; ++i) {
        fv[i] = f(v[i]);
    }

    std::vector<std::size_t> order(dim + 1);
    std::vector<double> centroid(dim), xr(dim), xe(dim), xc(dim);

    for (int iter = 0; iter < max_iter; ++iter) {
        for (std::size_t i = 0; i <= dim; ++i) order[i] = i;
        std::sort(order.begin(), order.end(),
                  [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
        const std::size_t best = order[0];
        const std::size_t worst = order[dim];
        const std::size_t second_worst = order[dim - 1];

        if (fv[worst] - fv[best] <= 1e-16 * (std::abs(fv[best]) + 1e-300)) {
            break;
        }

        std::fill(centroid.begin(), centroid.end(), 0.0);
        for (std::size_t i = 0; i <= dim; ++i) {
            if (i == worst) continue;
            for (std::size_t d = 0; d < dim; ++d) centroid[d] += v[i][d];
        }
        for (std::size_t d = 0; d < dim; ++d) centroid[d] /= static_cast<double>(dim);

        for (std::size_t d = 0; d < dim; ++d) xr[d] = centroid[d] + (centroid[d] - v[worst][d]);
        const double fr = f(xr);

        if (fr < fv[best]) {
            for (std::size_t d = 0; d < dim; ++d) xe[d] = centroid[d] + 2.0 * (centroid[d] - v[worst][d]);
            const double fe = f(xe);
            if (fe < fr) {
                v[worst] = xe;
                fv[worst] = fe;
            } else {
                v[worst] = xr;
                fv[worst] = fr;
            }
        } else if (fr < fv[second_worst]) {
            v[worst] = xr;
            fv[worst] = fr;
        } else {
            const bool outside = fr < fv[worst];
            const auto& ref = outside ? xr : v[worst];
            for (std::size_t d = 0; d < dim; ++d) xc[d] = centroid[d] + 0.5 * (ref[d] - centroid[d]);
            const double fc = f(xc);
            if (fc < std::min(fr, fv[worst])) {
                v[worst] = xc;
                fv[worst] = fc;
            } else {
                for (std::size_t i = 0; i <= dim; ++i) {
                    if (i == best) continue;
                    for (std::size_t d = 0; d < dim; ++d) {
                        v[i][d] = v[best][d] + 0.5 * (v[i][d] - v[best][d]);
                    }
                    fv[i] = f(v[i]);
                }
            }
        }
    }

    std::size_t best = 0;
    for (std::size_t i = 1; i <= dim; ++i) {
        if (fv[i] < fv[best]) best = i;
    }
    start = v[best];
    f_best = fv[best];
}

// Nelder-Mead with shrinking-simplex restarts; polishes into the basin of
// the start until the SSE stops improving.
double minimize(const Objective& f, std::vector<double>& theta) {
    double f_best = f(theta);
    std::array<double, 5> scale = {0.05, 0.05, 0.2, 0.2, 0.3};
    for (int restart = 0; restart < 8; ++restart) {
        std::vector<double> steps(theta.size());
        for (std::size_t d = 0; d < theta.size(); ++d) {
            steps[d] = std::max(std::abs(theta[d]) * scale[d], 1e-3 * scale[d]);
        }
        const double before = f_best;
        nelder_mead(f, theta, f_best, steps, 4000);
        for (auto& s : scale) s *= 0.1;
        if (!(f_best < before * (1.0 - 1e-12)) && restart > 1) {
            break;
        }
    }
    return f_best;
}

}  // namespace

double LogisticFit::operator()(double x) const {
    return richards(A, K, B, M, nu, x);
}

double sse(const LogisticFit& fit, std::span<const double> x, std::span<const double> y) {
    double acc = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = fit(x[i]) - y[i];
        acc += r * r;
    }
    return acc;
}

LogisticFit fit_logistic(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) {
        throw std::invalid_argument("fit_logistic: x and y lengths differ");
    }
    if (x.size() < 6) {
        throw std::invalid_argument("fit_logistic: need at least 6 points");
    }
    for (std::size_t i = 1; i < x.size(); ++i) {
        if (!(x[i] > x[i - 1])) {
            throw std::invalid_argument("fit_logistic: x must be strictly increasing");
        }
    }

    const auto [min_it, max_it] = std::minmax_element(y.begin(), y.end());
    const double y_min = *min_it;
    const double y_max = *max_it;
    const double span = y_max - y_min;

    if (span < kDegenerateRange) {
        LogisticFit fit;
        fit.A = fit.K = y_min;
        fit.B = 0.0;
        fit.M = 0.5 * (x.front() + x.back());
        fit.nu = 1.0;
        fit.r_squared = 1.0;
        fit.degenerate = true;
        return fit;
    }

    // The level where the curve is halfway between the asymptotes, used to
    // place the inflection start.
    const double y_half = 0.5 * (y_min + y_max);
    std::size_t half_idx = 0;
    for (std::size_t i = 1; i < y.size(); ++i) {
        if (std::abs(y[i] - y_half) < std::abs(y[half_idx] - y_half)) half_idx = i;
    }
    const double dx = x.back() - x.front();
    const double m_half = x[half_idx];
    const double x_mid = 0.5 * (x.front() + x.back());

    // Five documented starts: bracketing asymptotes from the data extrema,
    // inflection at the half-level crossing or the axis midpoint, both slope
    // signs, nu = 1 (log nu = 0).
    const std::array<std::array<double, 5>, 5> starts = {{
        {y_min, y_max, +8.0 / dx, m_half, 0.0},
        {y_min, y_max, -8.0 / dx, m_half, 0.0},
        {y_min, y_max, +2.0 / dx, x_mid, 0.0},
        {y_min, y_max, -2.0 / dx, x_mid, 0.0},
        {y_min - 0.05 * span, y_max + 0.05 * span, +4.0 / dx, m_half, 0.0},
    }};

    const Objective f = [&](std::span<const double> th) { return objective(th, x, y); };

    std::vector<double> best_theta;
    double best_sse = std::numeric_limits<double>::max();
    for (const auto& s : starts) {
        std::vector<double> theta(s.begin(), s.end());
        const double v = minimize(f, theta);
        if (v < best_sse) {
            best_sse = v;
            best_theta = theta;
        }
    }

    LogisticFit fit;
    fit.A = best_theta[0];
    fit.K = best_theta[1];
    fit.B = best_theta[2];
    fit.M = best_theta[3];
    fit.nu = std::exp(best_theta[4]);

    double mean = 0.0;
    for (double v : y) mean += v;
    mean /= static_cast<double>(y.size());
    double sst = 0.0;
    for (double v : y) sst += (v - mean) * (v - mean);
    fit.r_squared = 1.0 - best_sse / sst;
    return fit;
}

}  // namespace ddtea
