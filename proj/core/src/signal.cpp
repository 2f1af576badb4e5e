#include "ddtea/signal.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

#include "ddtea/csv.hpp"
#include "ddtea/rng.hpp"

namespace ddtea {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

}  // namespace

void validate(const TaskConfig& c) {
    if (c.segments < 1) {
        throw std::invalid_argument("TaskConfig: segments must be >= 1");
    }
    if (c.samples_per_period < 2) {
        throw std::invalid_argument("TaskConfig: samples_per_period must be >= 2");
    }
    if (!(c.class_balance >= 0.0 && c.class_balance <= 1.0)) {
        throw std::invalid_argument("TaskConfig: class_balance must be in [0, 1]");
    }
}

LabeledSignal generate_task(const TaskConfig& c) {
    validate(c);
    const std::size_t spp = c.samples_per_period;

    LabeledSignal sig;
    sig.samples.reserve(c.segments * spp);
    sig.labels.reserve(c.segments * spp);

    for (std::size_t seg = 0; seg < c.segments; ++seg) {
        const bool square = rng::uniform(c.seed, seg) < c.class_balance;
        const int label = square ? 1 : 0;
        for (std::size_t k = 0; k < spp; ++k) {
            const double v = std::sin(kTwoPi * static_cast<double>(k) / static_cast<double>(spp));
            sig.samples.push_back(square ? (v < 0.0 ? -1.0 : 1.0) : v);  // sign(0) := +1
            sig.labels.push_back(label);
        }
    }
    return sig;
}

LabeledSignal add_noise(const LabeledSignal& sig, double snr_db, std::uint64_t seed) {
    if (sig.samples.empty()) {
        throw std::invalid_argument("add_noise: signal is empty");
    }
    if (!std::isfinite(snr_db)) {
        throw std::invalid_argument("add_noise: snr_db must be finite");
    }

    const double p_signal = mean_square_power(sig.samples);
    const double sigma = std::sqrt(p_signal * std::pow(10.0, -snr_db / 10.0));

    LabeledSignal out;
    out.samples.reserve(sig.size());
    out.labels = sig.labels;
    out.snr_db = snr_db;
    for (std::size_t k = 0; k < sig.samples.size(); ++k) {
        out.samples.push_back(sig.samples[k] + sigma * rng::gaussian(seed, k));
    }
    return out;
}

double mean_square_power(std::span<const double> samples) {
    double acc = 0.0;
    for (double v : samples) {
        acc += v * v;
    }
    return samples.empty() ? 0.0 : acc / static_cast<double>(samples.size());
}

void write_csv(const LabeledSignal& sig, std::ostream& os) {
    os << "sample,label\n";
    for (std::size_t k = 0; k < sig.samples.size(); ++k) {
        os << fmt_g17(sig.samples[k]) << ',' << sig.labels[k] << '\n';
    }
}

}  // namespace ddtea
