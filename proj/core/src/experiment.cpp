#include "ddtea/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "ddtea/csv.hpp"
#include "ddtea/rng.hpp"

namespace ddtea {

namespace {

// Sub-stream tags under one trial seed.
constexpr std::uint64_t kTagTask = 1;
constexpr std::uint64_t kTagNoise = 2;
constexpr std::uint64_t kTagMask = 3;

std::uint64_t trial_seed(const TrialConfig& c, std::size_t rep_index) {
    return rng::combine(rng::combine(c.master_seed, c.sweep_point), rep_index);
}

struct SplitView {
    StateMatrix x_train;
    std::vector<double> y_train;
    StateMatrix x_test;
    std::vector<int> labels_test;
};

SplitView washout_and_split(const StateMatrix& states, std::span<const int> labels,
                            std::size_t washout, double split) {
    const std::size_t total = states.rows;
    const std::size_t usable = total - washout;
    const auto n_train = static_cast<std::size_t>(std::floor(split * static_cast<double>(usable)));
    const std::size_t n_test = usable - n_train;
    if (n_train == 0 || n_test == 0) {
        throw std::invalid_argument("split leaves an empty train or test span");
    }

    SplitView v;
    v.x_train = StateMatrix(n_train, states.cols);
    v.x_test = StateMatrix(n_test, states.cols);
    v.y_train.resize(n_train);
    v.labels_test.resize(n_test);
    for (std::size_t r = 0; r < n_train; ++r) {
        const std::size_t src = washout + r;
        std::copy_n(&states.data[src * states.cols], states.cols, &v.x_train.data[r * states.cols]);
        v.y_train[r] = static_cast<double>(labels[src]);
    }
    for (std::size_t r = 0; r < n_test; ++r) {
        const std::size_t src = washout + n_train + r;
        std::copy_n(&states.data[src * states.cols], states.cols, &v.x_test.data[r * states.cols]);
        v.labels_test[r] = labels[src];
    }
    return v;
}

void mean_and_std(std::span<const double> values, double& mean, double& sd) {
    const auto n = static_cast<double>(values.size());
    double acc = 0.0;
    for (double v : values) acc += v;
    mean = acc / n;
    if (values.size() < 2) {
        sd = 0.0;
        return;
    }
    double sq = 0.0;
    for (double v : values) sq += (v - mean) * (v - mean);
    sd = std::sqrt(sq / (n - 1.0));
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

void validate(const TrialConfig& c) {
    validate(c.task);
    validate_against_model(c.rc, c.model);
    if (!(c.split > 0.0 && c.split < 1.0)) {
        throw std::invalid_argument("TrialConfig: split must be in (0, 1)");
    }
    const std::size_t total = c.task.segments * c.task.samples_per_period;
    if (c.washout + 10 > total) {
        throw std::invalid_argument("TrialConfig: washout + 10 exceeds task length");
    }
    if (c.snr_db && !std::isfinite(*c.snr_db)) {
        throw std::invalid_argument("TrialConfig: snr_db must be finite");
    }
    if (c.lambda && (!std::isfinite(*c.lambda) || *c.lambda < 0.0)) {
        throw std::invalid_argument("TrialConfig: lambda must be finite and >= 0");
    }
}

Metrics run_trial(const TrialConfig& c, std::size_t rep_index) {
    return run_trial_artifacts(c, rep_index).metrics;
}

TrialArtifacts run_trial_artifacts(const TrialConfig& c, std::size_t rep_index) {
    validate(c);
    const std::uint64_t seed = trial_seed(c, rep_index);

    TaskConfig task = c.task;
    task.seed = rng::combine(seed, kTagTask);

    ReservoirConfig rc = c.rc;
    rc.mask_seed = c.resample_mask ? rng::combine(seed, kTagMask)
                                   : rng::combine(c.master_seed, kTagMask);

    TrialArtifacts art;
    const char* stage = "generate_task";
    try {
        art.signal = generate_task(task);
        if (c.snr_db) {
            stage = "add_noise";
            art.signal = add_noise(art.signal, *c.snr_db, rng::combine(seed, kTagNoise));
        }

        stage = "collect_states";
        art.states = collect_states(c.model, rc, art.signal);

        stage = "split";
        SplitView v = washout_and_split(art.states, art.signal.labels, c.washout, c.split);
        v.x_train = append_bias_column(v.x_train);
        v.x_test = append_bias_column(v.x_test);

        stage = "train_ridge";
        const double lambda = c.lambda ? *c.lambda : default_lambda(v.x_train);
        art.weights = train_ridge(v.x_train, v.y_train, lambda, BiasColumn::Last);

        stage = "evaluate";
        art.metrics = evaluate(art.weights, v.x_test, v.labels_test);
        return art;
    } catch (const std::exception& e) {
        throw std::runtime_error(std::string("run_trial[") + stage + "]: " + e.what());
    }
}

std::size_t SweepResult::invalid_count() const {
    std::size_t n = 0;
    for (auto v : valid) n += (v == 0);
    return n;
}

SweepResult sweep(const TrialConfig& base, SweepAxis axis, std::span<const double> values,
                  std::size_t n_reps, unsigned threads) {
    if (values.empty()) {
        throw std::invalid_argument("sweep: values must be non-empty");
    }
    if (n_reps < 1) {
        throw std::invalid_argument("sweep: n_reps must be >= 1");
    }

    const std::size_t n_points = values.size();
    const std::size_t n_items = n_points * n_reps;
    std::vector<Metrics> metrics(n_items);
    std::vector<std::string> item_errors(n_items);

    const auto run_item = [&](std::size_t item) {
        const std::size_t point = item / n_reps;
        const std::size_t rep = item % n_reps;
        TrialConfig c = base;
        c.sweep_point = point;
        if (axis == SweepAxis::Current) {
            c.rc.zeta_bias = values[point];
        } else {
            c.snr_db = values[point];
        }
        try {
            metrics[item] = run_trial(c, rep);
        } catch (const std::exception& e) {
            item_errors[item] = e.what();
        }
    };

    unsigned n_threads = threads == 0 ? std::thread::hardware_concurrency() : threads;
    n_threads = std::max(1u, std::min<unsigned>(n_threads, 256));
    if (n_threads == 1) {
        for (std::size_t item = 0; item < n_items; ++item) run_item(item);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(n_threads);
        for (unsigned t = 0; t < n_threads; ++t) {
            pool.emplace_back([&] {
                for (std::size_t item = next.fetch_add(1); item < n_items;
                     item = next.fetch_add(1)) {
                    run_item(item);
                }
            });
        }
        for (auto& th : pool) th.join();
    }

    // Reduce strictly in index order: results do not depend on scheduling.
    SweepResult r;
    r.axis_kind = axis;
    r.n_reps = n_reps;
    r.axis.assign(values.begin(), values.end());
    r.mean_accuracy.resize(n_points);
    r.std_accuracy.resize(n_points);
    r.mean_rmse.resize(n_points);
    r.std_rmse.resize(n_points);
    r.valid.assign(n_points, 1);
    r.errors.assign(n_points, "");

    std::vector<double> acc(n_reps), rmse(n_reps);
    for (std::size_t point = 0; point < n_points; ++point) {
        bool ok = true;
        for (std::size_t rep = 0; rep < n_reps; ++rep) {
            const std::size_t item = point * n_reps + rep;
            if (!item_errors[item].empty()) {
                ok = false;
                r.errors[point] = item_errors[item];
                break;
            }
            acc[rep] = metrics[item].accuracy;
            rmse[rep] = metrics[item].rmse;
        }
        if (!ok) {
            r.valid[point] = 0;
            r.mean_accuracy[point] = r.std_accuracy[point] = 0.0;
            r.mean_rmse[point] = r.std_rmse[point] = 0.0;
            continue;
        }
        mean_and_std(acc, r.mean_accuracy[point], r.std_accuracy[point]);
        mean_and_std(rmse, r.mean_rmse[point], r.std_rmse[point]);
    }
    return r;
}

void write_csv(const SweepResult& r, std::ostream& os, const LogisticFit* fit) {
    os << "axis,mean_accuracy,std_accuracy,mean_rmse,std_rmse,n_reps,valid\n";
    for (std::size_t i = 0; i < r.axis.size(); ++i) {
        os << fmt_g17(r.axis[i]) << ',' << fmt_g17(r.mean_accuracy[i]) << ','
           << fmt_g17(r.std_accuracy[i]) << ',' << fmt_g17(r.mean_rmse[i]) << ','
           << fmt_g17(r.std_rmse[i]) << ',' << r.n_reps << ',' << int(r.valid[i]) << '\n';
    }
    if (fit != nullptr) {
        os << "# A=" << fmt_g17(fit->A) << '\n';
        os << "# K=" << fmt_g17(fit->K) << '\n';
        os << "# B=" << fmt_g17(fit->B) << '\n';
        os << "# M=" << fmt_g17(fit->M) << '\n';
        os << "# nu=" << fmt_g17(fit->nu) << '\n';
        os << "# r_squared=" << fmt_g17(fit->r_squared) << '\n';
        os << "# degenerate=" << (fit->degenerate ? 1 : 0) << '\n';
    }
}

SpeedReport bench_speed(const ThieleParams& p, double s0, double dt, double rk4_step) {
    validate(p);
    if (!(rk4_step > 0.0) || rk4_step > dt) {
        throw std::invalid_argument("bench_speed: need 0 < rk4_step <= dt");
    }
    {
        const EvolutionOutcome probe = evolve_closed_form(p, s0, dt);
        if (probe.blew_up()) {
            throw std::invalid_argument("bench_speed: parameters blow up before dt");
        }
    }

    using clock = std::chrono::steady_clock;
    SpeedReport report;

    // Closed form: 31 blocks x 4096 evaluations, median per-eval time.
    // Results are accumulated so the calls cannot be optimized away.
    constexpr int kBlocks = 31;
    constexpr int kPerBlock = 4096;
    double sink = 0.0;
    std::vector<double> block_ns(kBlocks);
    for (int b = 0; b < kBlocks; ++b) {
        const auto t0 = clock::now();
        for (int i = 0; i < kPerBlock; ++i) {
            sink += evolve_closed_form(p, s0, dt).s;
        }
        const auto t1 = clock::now();
        block_ns[b] =
            std::chrono::duration<double, std::nano>(t1 - t0).count() / double(kPerBlock);
    }
    report.closed_ns_per_eval = median(block_ns);
    report.timer_warning = report.closed_ns_per_eval < 5.0;

    constexpr int kTraces = 11;
    std::vector<double> trace_ns(kTraces);
    for (int i = 0; i < kTraces; ++i) {
        const auto t0 = clock::now();
        sink += evolve_rk4(p, s0, dt, rk4_step).s;
        const auto t1 = clock::now();
        trace_ns[i] = std::chrono::duration<double, std::nano>(t1 - t0).count();
    }
    report.rk4_ns_per_trace = median(trace_ns);

    report.speedup = report.rk4_ns_per_trace / report.closed_ns_per_eval;
    report.checksum = sink;
    return report;
}

}  // namespace ddtea
