// Time-multiplexed single-oscillator reservoir.
//
// Each input sample u_k is distributed over n_virtual time slots ("virtual
// neurons") of one oscillator. Slot i applies the mask weight m_i and holds
// the drive current
//
//     zeta = zeta_bias + zeta_span * m_i * u_k
//
// for the node duration theta; the reduced position at the end of the slot
// is the neuron's reading. The orbit carries over between slots and samples
// with no reset, which is what gives the reservoir its memory. Node duration
// is chosen inside the nonlinear transient (theta ~ 1/alpha), not in the
// memoryless saturated regime.
//
// The input amplitude is clipped to [-1, 1] before encoding (drive
// saturation), so noisy excursions can never push the current outside the
// device model's validity interval once bias +- span fits in it.
#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "ddtea/device_model.hpp"
#include "ddtea/signal.hpp"

namespace ddtea {

struct ReservoirConfig {
    std::size_t n_virtual = 24;
    double theta = 20e-9;       ///< node duration, seconds
    double zeta_bias = 1.5;     ///< working-point drive current
    double zeta_span = 0.3;     ///< modulation amplitude
    std::uint64_t mask_seed = 0;
    double s_init = 0.01;       ///< initial orbit
};

/// Fixed +-1 weights distributing each sample across the virtual neurons.
struct Mask {
    std::vector<double> values;
};

/// i.i.d. uniform +-1 entries, deterministic in the seed.
Mask make_mask(std::size_t n_virtual, std::uint64_t mask_seed);

/// Reservoir feature matrix: one row per input sample, one column per
/// virtual neuron. Row-major storage.
struct StateMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    StateMatrix() = default;
    StateMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

    [[nodiscard]] double& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
    [[nodiscard]] double at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
};

/// Throws std::invalid_argument / std::out_of_range when the config is
/// malformed or the drive range [bias - span, bias + span] leaves the
/// model's validity interval.
void validate_against_model(const ReservoirConfig& rc, const DeviceModel& model);

/// Drive one continuous oscillator trajectory through the whole signal and
/// record the end-of-node positions. Exactly one closed-form evolution per
/// node; errors are annotated with the offending sample/node indices.
StateMatrix collect_states(const DeviceModel& model, const ReservoirConfig& rc,
                           const LabeledSignal& sig);

/// CSV export with header "v0,v1,...".
void write_csv(const StateMatrix& m, std::ostream& os);

}  // namespace ddtea
