// Full trial pipeline and parameter sweeps.
//
// One trial is: generate task -> add noise (unless clean) -> collect
// reservoir states -> drop washout rows -> chronological train/test split ->
// ridge training -> metrics on the test span.
//
// All randomness of a trial derives from
//
//     trial_seed = combine(combine(master_seed, point_index), rep_index)
//
// with rng::combine (the documented splitmix64 avalanche), so results are
// bitwise independent of scheduling and thread count. Task order and noise
// are resampled per repetition; the input mask is fixed per sweep unless
// resample_mask is set.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ddtea/device_model.hpp"
#include "ddtea/logistic_fit.hpp"
#include "ddtea/readout.hpp"
#include "ddtea/reservoir.hpp"
#include "ddtea/signal.hpp"

namespace ddtea {

struct TrialConfig {
    TaskConfig task;      ///< .seed is ignored, derived from the trial seed
    ReservoirConfig rc;   ///< .mask_seed is ignored, derived (see above)
    DeviceModel model = DeviceModel::synthetic_default();
    std::optional<double> snr_db;   ///< nullopt = clean input
    std::optional<double> lambda;   ///< nullopt = default_lambda(X_train)
    double split = 0.8;             ///< train fraction after washout
    std::size_t washout = 50;       ///< samples dropped before the split
    std::uint64_t master_seed = 0;
    std::size_t sweep_point = 0;    ///< point index used in seed derivation
    bool resample_mask = false;
};

void validate(const TrialConfig& c);

/// Run one repetition of the pipeline; deterministic in
/// (config, sweep_point, rep_index).
Metrics run_trial(const TrialConfig& c, std::size_t rep_index);

/// Intermediate products of one repetition, for export and inspection.
struct TrialArtifacts {
    LabeledSignal signal;    ///< after noise injection (when not clean)
    StateMatrix states;      ///< full reservoir matrix, pre-washout
    ReadoutWeights weights;  ///< trained readout (includes bias weight)
    Metrics metrics;
};

/// Same pipeline as run_trial, keeping the intermediates.
TrialArtifacts run_trial_artifacts(const TrialConfig& c, std::size_t rep_index);

enum class SweepAxis { Current, Snr };

/// Per-point aggregates over n_reps repetitions. A point whose trial fails
/// is marked invalid (error recorded) instead of aborting the sweep.
struct SweepResult {
    SweepAxis axis_kind = SweepAxis::Snr;
    std::size_t n_reps = 0;
    std::vector<double> axis;
    std::vector<double> mean_accuracy;
    std::vector<double> std_accuracy;
    std::vector<double> mean_rmse;
    std::vector<double> std_rmse;
    std::vector<std::uint8_t> valid;
    std::vector<std::string> errors;  ///< empty string when the point is valid

    [[nodiscard]] std::size_t invalid_count() const;
};

/// Sweep zeta_bias or snr_db over `values`, n_reps repetitions per point,
/// optionally on `threads` worker threads (0 = hardware concurrency).
/// Output is bitwise independent of the thread count.
SweepResult sweep(const TrialConfig& base, SweepAxis axis, std::span<const double> values,
                  std::size_t n_reps, unsigned threads = 0);

/// CSV with header axis,mean_accuracy,std_accuracy,mean_rmse,std_rmse,
/// n_reps,valid; a fit, when given, is appended as '# key=value' comments.
void write_csv(const SweepResult& r, std::ostream& os, const LogisticFit* fit = nullptr);

/// Wall-clock comparison of one closed-form evaluation against one RK4
/// trace of the same evolution.
struct SpeedReport {
    double closed_ns_per_eval = 0.0;
    double rk4_ns_per_trace = 0.0;
    double speedup = 0.0;
    bool timer_warning = false;  ///< median closed-form eval below 5 ns
    double checksum = 0.0;       ///< consumed results, defeats dead-code elimination
};

/// Median over >= 1e5 closed-form evaluations and >= 10 RK4 traces at the
/// given step, identical (p, s0, dt) on both paths.
SpeedReport bench_speed(const ThieleParams& p, double s0, double dt, double rk4_step);

}  // namespace ddtea
