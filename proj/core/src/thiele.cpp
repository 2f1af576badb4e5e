#include "ddtea/thiele.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace ddtea {

namespace {

// phi(x) = (1 - exp(-x))/x, continuous with phi(0) = 1.
double phi(double x) {
    if (std::abs(x) < 1e-300) {
        return 1.0;
    }
    return -std::expm1(-x) / x;
}

// s^n for real n > 0, with a fast path for small integer exponents
// (the RK4 path evaluates this millions of times per trace).
double pow_pos(double s, double n) {
    const int ni = static_cast<int>(n);
    if (static_cast<double>(ni) == n && ni >= 1 && ni <= 8) {
        double r = s;
        for (int i = 1; i < ni; ++i) {
            r *= s;
        }
        return r;
    }
    return std::pow(s, n);
}

// Escape time of the diverging branch, only meaningful when the radicand
// vanishes at finite time. log1p keeps it accurate for alpha -> 0.
double escape_time(const ThieleParams& p, double s0n) {
    if (p.alpha == 0.0) {
        return 1.0 / (p.n * p.beta * s0n);
    }
    return std::log1p(p.alpha / (p.beta * s0n)) / (p.n * p.alpha);
}

EvolutionOutcome blow_up(double t_star) {
    EvolutionOutcome out;
    out.blow_up_time = t_star;
    return out;
}

}  // namespace

void validate(const ThieleParams& p) {
    if (!std::isfinite(p.alpha) || !std::isfinite(p.beta)) {
        throw std::invalid_argument("ThieleParams: alpha and beta must be finite");
    }
    if (!std::isfinite(p.n) || p.n <= 0.0) {
        throw std::invalid_argument("ThieleParams: n must be finite and > 0, got " +
                                    std::to_string(p.n));
    }
}

EvolutionOutcome evolve_closed_form(const ThieleParams& p, double s0, double dt) {
    validate(p);
    if (!std::isfinite(s0) || s0 < 0.0) {
        throw std::invalid_argument("evolve_closed_form: s0 must be finite and >= 0");
    }
    if (!std::isfinite(dt) || dt < 0.0) {
        throw std::invalid_argument("evolve_closed_form: dt must be finite and >= 0");
    }
    if (s0 == 0.0) {
        return {.s = 0.0};  // s = 0 is a fixed point
    }
    if (dt == 0.0) {
        return {.s = s0};
    }

    const double s0n = pow_pos(s0, p.n);
    const double x = p.n * p.alpha * dt;
    const double radicand = std::exp(-x) - p.n * p.beta * s0n * dt * phi(x);
    if (radicand <= 0.0) {
        return blow_up(escape_time(p, s0n));
    }
    return {.s = s0 * std::exp(-std::log(radicand) / p.n)};
}

std::optional<double> steady_state(const ThieleParams& p) {
    validate(p);
    if (p.alpha > 0.0 && p.beta < 0.0) {
        return std::exp(std::log(-p.alpha / p.beta) / p.n);
    }
    if (p.alpha < 0.0 || (p.alpha == 0.0 && p.beta < 0.0)) {
        return 0.0;
    }
    return std::nullopt;  // alpha >= 0, beta >= 0: growth or marginal
}

EvolutionOutcome evolve_rk4(const ThieleParams& p, double s0, double dt, double step) {
    validate(p);
    if (!std::isfinite(s0) || s0 < 0.0) {
        throw std::invalid_argument("evolve_rk4: s0 must be finite and >= 0");
    }
    if (!std::isfinite(dt) || dt < 0.0) {
        throw std::invalid_argument("evolve_rk4: dt must be finite and >= 0");
    }
    if (!std::isfinite(step) || step <= 0.0 || (dt > 0.0 && step > dt)) {
        throw std::invalid_argument("evolve_rk4: need 0 < step <= dt");
    }
    if (s0 == 0.0) {
        return {.s = 0.0};
    }

    const double alpha = p.alpha;
    const double beta = p.beta;
    const double n = p.n;
    const auto f = [&](double s) { return alpha * s + beta * s * pow_pos(std::abs(s), n); };

    const auto n_steps = static_cast<std::size_t>(std::ceil(dt / step - 1e-9));
    const double h = dt / static_cast<double>(n_steps);
    double s = s0;
    for (std::size_t i = 0; i < n_steps; ++i) {
        const double k1 = f(s);
        const double k2 = f(s + 0.5 * h * k1);
        const double k3 = f(s + 0.5 * h * k2);
        const double k4 = f(s + h * k3);
        s += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if (!std::isfinite(s) || std::abs(s) > kRk4DivergenceGuard) {
            return blow_up(static_cast<double>(i + 1) * h);
        }
    }
    return {.s = s};
}

TraceResult trace(const ThieleParams& p, double s0, std::span<const double> t_grid) {
    validate(p);
    double prev = 0.0;
    for (double t : t_grid) {
        if (!std::isfinite(t) || t < prev) {
            throw std::invalid_argument("trace: t_grid must be non-decreasing and start at >= 0");
        }
        prev = t;
    }

    TraceResult result;
    result.s.reserve(t_grid.size());
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
        const EvolutionOutcome out = evolve_closed_form(p, s0, t_grid[i]);
        if (out.blew_up()) {
            result.blow_up_index = i;
            result.blow_up_time = out.blow_up_time;
            break;
        }
        result.s.push_back(out.s);
    }
    return result;
}

}  // namespace ddtea
