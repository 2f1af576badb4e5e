// Labeled sine/square waveform sequences and input-referred Gaussian noise.
#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

namespace ddtea {

enum class WaveClass : int { Sine = 0, Square = 1 };

struct TaskConfig {
    std::size_t segments = 100;          ///< waveform periods in the sequence
    std::size_t samples_per_period = 12;
    std::uint64_t seed = 0;
    double class_balance = 0.5;          ///< probability of "square" per segment
};

/// Throws std::invalid_argument on violated invariants
/// (segments >= 1, samples_per_period >= 2, balance in [0, 1]).
void validate(const TaskConfig& c);

/// Sampled waveform sequence with per-sample class labels.
struct LabeledSignal {
    std::vector<double> samples;     ///< amplitudes; in [-1, 1] before noise
    std::vector<int> labels;         ///< 0 = sine, 1 = square, constant per segment
    std::optional<double> snr_db;    ///< nullopt while clean

    [[nodiscard]] std::size_t size() const { return samples.size(); }
};

/// Concatenation of `segments` periods in random class order: sine periods
/// are sin(2*pi*k/spp), square periods sign(sin(2*pi*k/spp)) with
/// sign(0) := +1. Deterministic in the seed.
LabeledSignal generate_task(const TaskConfig& c);

/// Add i.i.d. zero-mean Gaussian noise with variance chosen so that
/// 10*log10(P_signal / P_noise) = snr_db, P_signal being the empirical mean
/// square of the input samples. Labels are unchanged; deterministic in seed.
LabeledSignal add_noise(const LabeledSignal& sig, double snr_db, std::uint64_t seed);

/// Empirical mean-square power.
double mean_square_power(std::span<const double> samples);

/// Two-column CSV export: header "sample,label".
void write_csv(const LabeledSignal& sig, std::ostream& os);

}  // namespace ddtea
