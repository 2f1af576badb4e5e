// Reduced vortex-core dynamics
//
//     ds/dt = alpha * s + beta * s^(n+1)
//
// This Bernoulli equation has the exact solution
//
//     s(t) = s0 / ( (1 + beta*s0^n/alpha) * exp(-n*alpha*t)
//                   - beta*s0^n/alpha )^(1/n)
//
// which we evaluate in the cancellation-free form
//
//     s(t) = s0 * R^(-1/n),   R = exp(-x) - n*beta*s0^n*t * phi(x)
//
// with x = n*alpha*t and phi(x) = (1 - exp(-x))/x. The large terms
// beta*s0^n/alpha never appear, so the evaluation stays accurate through
// alpha -> 0, where R reduces exactly to the limit form 1 - n*beta*s0^n*t.
//
// R <= 0 means the orbit diverges before t: a finite-time blow-up, possible
// only for beta > 0. The escape time is t* = log1p(alpha/(beta*s0^n))/(n*alpha).
#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <vector>

namespace ddtea {

/// Rates describing one oscillator at one drive current.
struct ThieleParams {
    double alpha = 0.0;  ///< linear rate, 1/s (sign free)
    double beta = 0.0;   ///< nonlinear rate, 1/s (sign free)
    double n = 2.0;      ///< nonlinearity exponent, dimensionless, > 0
};

/// Throws std::invalid_argument unless all fields are finite and n > 0.
void validate(const ThieleParams& p);

/// Final reduced position, or the finite escape time when the orbit
/// diverges before the requested horizon.
struct EvolutionOutcome {
    double s = 0.0;
    double blow_up_time = std::numeric_limits<double>::quiet_NaN();

    [[nodiscard]] bool blew_up() const { return blow_up_time == blow_up_time; }
};

/// Exact evolution of s over dt >= 0 from s0 >= 0.
EvolutionOutcome evolve_closed_form(const ThieleParams& p, double s0, double dt);

/// Attractor of the flow: (-alpha/beta)^(1/n) for alpha > 0, beta < 0
/// (the stable limit-cycle radius), 0 when the orbit decays to the center,
/// nullopt when no finite nonzero attractor exists.
std::optional<double> steady_state(const ThieleParams& p);

/// Classical fixed-step 4th-order Runge-Kutta integration of the same
/// equation; independent reference path for evolve_closed_form. Flags
/// blow-up when s exceeds the divergence guard (1e6) or turns non-finite;
/// the reported escape time is then the abort time, accurate to ~one step.
EvolutionOutcome evolve_rk4(const ThieleParams& p, double s0, double dt, double step);

/// RK4 divergence guard; far above any physical orbit (s is O(1)).
inline constexpr double kRk4DivergenceGuard = 1e6;

struct TraceResult {
    std::vector<double> s;  ///< values at grid times before any blow-up
    std::optional<std::size_t> blow_up_index;
    double blow_up_time = std::numeric_limits<double>::quiet_NaN();

    [[nodiscard]] bool complete() const { return !blow_up_index.has_value(); }
};

/// Closed-form s at each grid time, measured from s0 at t = 0. The grid must
/// be non-decreasing and start at >= 0. Stops at the first grid time past a
/// blow-up and records the offending index.
TraceResult trace(const ThieleParams& p, double s0, std::span<const double> t_grid);

}  // namespace ddtea
