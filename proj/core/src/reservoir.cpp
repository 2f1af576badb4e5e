#include "ddtea/reservoir.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <string>

#include "ddtea/csv.hpp"
#include "ddtea/rng.hpp"

namespace ddtea {

Mask make_mask(std::size_t n_virtual, std::uint64_t mask_seed) {
    if (n_virtual < 1) {
        throw std::invalid_argument("make_mask: n_virtual must be >= 1");
    }
    Mask mask;
    mask.values.reserve(n_virtual);
    for (std::size_t i = 0; i < n_virtual; ++i) {
        mask.values.push_back((rng::at(mask_seed, i) & 1u) ? 1.0 : -1.0);
    }
    return mask;
}

void validate_against_model(const ReservoirConfig& rc, const DeviceModel& model) {
    if (rc.n_virtual < 1) {
        throw std::invalid_argument("ReservoirConfig: n_virtual must be >= 1");
    }
    if (!(rc.theta > 0.0) || !std::isfinite(rc.theta)) {
        throw std::invalid_argument("ReservoirConfig: theta must be positive and finite");
    }
    if (!std::isfinite(rc.s_init) || rc.s_init < 0.0) {
        throw std::invalid_argument("ReservoirConfig: s_init must be finite and >= 0");
    }
    if (!std::isfinite(rc.zeta_bias) || !std::isfinite(rc.zeta_span) || rc.zeta_span < 0.0) {
        throw std::invalid_argument("ReservoirConfig: zeta_bias/zeta_span malformed");
    }
    const double lo = rc.zeta_bias - rc.zeta_span;
    const double hi = rc.zeta_bias + rc.zeta_span;
    if (lo < model.zeta_min() || hi > model.zeta_max()) {
        throw std::out_of_range("ReservoirConfig: drive range [" + fmt_g17(lo) + ", " +
                                fmt_g17(hi) + "] leaves model validity [" +
                                fmt_g17(model.zeta_min()) + ", " + fmt_g17(model.zeta_max()) +
                                "]");
    }
}

StateMatrix collect_states(const DeviceModel& model, const ReservoirConfig& rc,
                           const LabeledSignal& sig) {
    validate_against_model(rc, model);

    const Mask mask = make_mask(rc.n_virtual, rc.mask_seed);
    StateMatrix m(sig.size(), rc.n_virtual);

    double s = rc.s_init;
    for (std::size_t k = 0; k < sig.size(); ++k) {
        const double u = std::clamp(sig.samples[k], -1.0, 1.0);
        for (std::size_t i = 0; i < rc.n_virtual; ++i) {
            const double zeta = rc.zeta_bias + rc.zeta_span * mask.values[i] * u;
            try {
                const ThieleParams p = model.params_for_current(zeta);
                const EvolutionOutcome out = evolve_closed_form(p, s, rc.theta);
                if (out.blew_up()) {
                    throw std::runtime_error("orbit blow-up at t* = " + fmt_g17(out.blow_up_time));
                }
                s = out.s;
            } catch (const std::exception& e) {
                throw std::runtime_error("collect_states at sample " + std::to_string(k) +
                                         ", node " + std::to_string(i) + ": " + e.what());
            }
            m.at(k, i) = s;
        }
    }
    return m;
}

void write_csv(const StateMatrix& m, std::ostream& os) {
    for (std::size_t c = 0; c < m.cols; ++c) {
        os << (c ? "," : "") << 'v' << c;
    }
    os << '\n';
    for (std::size_t r = 0; r < m.rows; ++r) {
        for (std::size_t c = 0; c < m.cols; ++c) {
            os << (c ? "," : "") << fmt_g17(m.at(r, c));
        }
        os << '\n';
    }
}

}  // namespace ddtea
