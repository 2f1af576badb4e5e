// ddtea command-line front end: traces, trials, sweeps, curve fits,
// speed benchmarks and model validation.
//
// Exit codes (stable contract):
//   0  success
//   2  usage, argument, config or model errors
//   3  dynamics errors (orbit blow-up, failed trial pipeline)
//   4  sweep completed but more than half of its points are invalid

#include <CLI11.hpp>

#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ddtea/csv.hpp"
#include "ddtea/device_model.hpp"
#include "ddtea/experiment.hpp"
#include "ddtea/logistic_fit.hpp"
#include "ddtea/run_config.hpp"
#include "ddtea/svg.hpp"
#include "ddtea/thiele.hpp"
#include "ddtea/version.hpp"

namespace fs = std::filesystem;
using namespace ddtea;

namespace {

struct exit_error : std::runtime_error {
    int code;
    exit_error(int c, const std::string& msg) : std::runtime_error(msg), code(c) {}
};

std::string timestamp_utc() {
    const std::time_t now = std::time(nullptr);
    char buf[32];
    std::tm tm_utc{};
    gmtime_r(&now, &tm_utc);
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
    return buf;
}

// Per-knob resolution: explicit flag > config file > fallback.
class Resolver {
  public:
    explicit Resolver(std::optional<KeyValueConfig> file) : file_(std::move(file)) {}

    double num(const CLI::Option* opt, double flag_value, const char* key, double fallback) const {
        if (opt != nullptr && opt->count() > 0) return flag_value;
        return file_ ? file_->get_double(key, fallback) : fallback;
    }

    std::uint64_t u64(const CLI::Option* opt, std::uint64_t flag_value, const char* key,
                      std::uint64_t fallback) const {
        if (opt != nullptr && opt->count() > 0) return flag_value;
        return file_ ? file_->get_u64(key, fallback) : fallback;
    }

    std::string str(const CLI::Option* opt, const std::string& flag_value, const char* key,
                    const std::string& fallback) const {
        if (opt != nullptr && opt->count() > 0) return flag_value;
        return file_ ? file_->get_string(key, fallback) : fallback;
    }

    bool flag(const CLI::Option* opt, const char* key, bool fallback) const {
        if (opt != nullptr && opt->count() > 0) return true;
        return file_ ? file_->get_u64(key, fallback ? 1 : 0) != 0 : fallback;
    }

    bool has(const CLI::Option* opt, const char* key) const {
        if (opt != nullptr && opt->count() > 0) return true;
        return file_ && file_->contains(key);
    }

  private:
    std::optional<KeyValueConfig> file_;
};

unsigned resolve_threads(const CLI::Option* opt, long long flag_value, const Resolver& r) {
    if (opt != nullptr && opt->count() > 0) return static_cast<unsigned>(flag_value);
    if (r.has(nullptr, "threads")) {
        return static_cast<unsigned>(r.u64(nullptr, 0, "threads", 0));
    }
    if (const char* env = std::getenv("DDTEA_THREADS")) {
        std::uint64_t v = 0;
        if (!std::string_view(env).empty()) {
            const std::string s(env);
            const char* last = s.data() + s.size();
            auto [p, ec] = std::from_chars(s.data(), last, v);
            if (ec != std::errc{} || p != last) {
                throw exit_error(2, "DDTEA_THREADS is not an unsigned integer: '" + s + "'");
            }
            return static_cast<unsigned>(v);
        }
    }
    return 0;
}

DeviceModel resolve_model(const std::string& spec) {
    if (spec == "default") {
        return DeviceModel::synthetic_default();
    }
    return DeviceModel::load(spec);
}

std::optional<KeyValueConfig> load_config_opt(const std::string& path) {
    if (path.empty()) return std::nullopt;
    return KeyValueConfig::load(path);
}

void write_manifest(const fs::path& out_dir, const KeyValueConfig& manifest) {
    const std::vector<std::string> comments = {
        std::string("ddtea ") + kVersion,
        "created " + timestamp_utc(),
        "re-run with: ddtea <command> --config manifest.txt",
    };
    manifest.save(out_dir / "manifest.txt", comments);
}

fs::path prepare_out_dir(const std::string& out) {
    fs::path dir(out);
    if (!dir.empty()) fs::create_directories(dir);
    return dir;
}

std::vector<double> linspace(double from, double to, std::size_t points) {
    std::vector<double> v;
    v.reserve(points);
    if (points == 1) {
        v.push_back(from);
        return v;
    }
    for (std::size_t i = 0; i < points; ++i) {
        v.push_back(from + (to - from) * static_cast<double>(i) / static_cast<double>(points - 1));
    }
    return v;
}

// ---------------------------------------------------------------------------
// Shared trial options (used by `trial` and `sweep`)
// ---------------------------------------------------------------------------

struct TrialOpts {
    std::string config_path;
    std::string out = ".";
    std::string model_spec = "default";
    std::uint64_t seed = 0;
    std::size_t segments = 100;
    std::size_t spp = 12;
    double balance = 0.5;
    std::size_t n_virtual = 24;
    double theta = 20e-9;
    double zeta_bias = 1.5;
    double zeta_span = 0.3;
    double s_init = 0.01;
    std::string snr = "clean";
    std::string lambda = "auto";
    double split = 0.8;
    std::size_t washout = 50;

    CLI::Option* o_config = nullptr;
    CLI::Option* o_out = nullptr;
    CLI::Option* o_model = nullptr;
    CLI::Option* o_seed = nullptr;
    CLI::Option* o_segments = nullptr;
    CLI::Option* o_spp = nullptr;
    CLI::Option* o_balance = nullptr;
    CLI::Option* o_n_virtual = nullptr;
    CLI::Option* o_theta = nullptr;
    CLI::Option* o_zeta_bias = nullptr;
    CLI::Option* o_zeta_span = nullptr;
    CLI::Option* o_s_init = nullptr;
    CLI::Option* o_snr = nullptr;
    CLI::Option* o_lambda = nullptr;
    CLI::Option* o_split = nullptr;
    CLI::Option* o_washout = nullptr;
    CLI::Option* o_resample_mask = nullptr;

    void attach(CLI::App* cmd) {
        o_config = cmd->add_option("--config", config_path, "Config file (ddtea-config v1)");
        o_out = cmd->add_option("--out", out, "Output directory");
        o_model = cmd->add_option("--model", model_spec, "Device model file or 'default'");
        o_seed = cmd->add_option("--seed", seed, "Master seed");
        o_segments = cmd->add_option("--segments", segments, "Waveform periods per sequence");
        o_spp = cmd->add_option("--spp", spp, "Samples per period");
        o_balance = cmd->add_option("--balance", balance, "Probability of a square segment");
        o_n_virtual = cmd->add_option("--n-virtual", n_virtual, "Virtual neurons");
        o_theta = cmd->add_option("--theta", theta, "Node duration, seconds");
        o_zeta_bias = cmd->add_option("--zeta-bias", zeta_bias, "Bias drive current");
        o_zeta_span = cmd->add_option("--zeta-span", zeta_span, "Drive modulation amplitude");
        o_s_init = cmd->add_option("--s-init", s_init, "Initial orbit");
        o_snr = cmd->add_option("--snr", snr, "Input SNR in dB, or 'clean'");
        o_lambda = cmd->add_option("--lambda", lambda, "Ridge regularizer, or 'auto'");
        o_split = cmd->add_option("--split", split, "Train fraction after washout");
        o_washout = cmd->add_option("--washout", washout, "Washout samples dropped");
        o_resample_mask = cmd->add_flag("--resample-mask", "Draw a fresh mask per repetition");
    }

    // Resolve into a TrialConfig and record every materialized knob.
    TrialConfig resolve(const Resolver& r, KeyValueConfig& manifest) const {
        TrialConfig c;
        const std::string model = r.str(o_model, model_spec, "model", "default");
        c.model = resolve_model(model);

        c.task.segments = r.u64(o_segments, segments, "segments", 100);
        c.task.samples_per_period = r.u64(o_spp, spp, "samples_per_period", 12);
        c.task.class_balance = r.num(o_balance, balance, "class_balance", 0.5);

        c.rc.n_virtual = r.u64(o_n_virtual, n_virtual, "n_virtual", 24);
        c.rc.theta = r.num(o_theta, theta, "theta", 20e-9);
        c.rc.zeta_bias = r.num(o_zeta_bias, zeta_bias, "zeta_bias", 1.5);
        c.rc.zeta_span = r.num(o_zeta_span, zeta_span, "zeta_span", 0.3);
        c.rc.s_init = r.num(o_s_init, s_init, "s_init", 0.01);

        const std::string snr_s = r.str(o_snr, snr, "snr_db", "clean");
        if (snr_s != "clean") {
            double v = 0.0;
            if (!parse_double(snr_s, v)) {
                throw exit_error(2, "--snr must be a number or 'clean', got '" + snr_s + "'");
            }
            c.snr_db = v;
        }
        const std::string lambda_s = r.str(o_lambda, lambda, "lambda", "auto");
        if (lambda_s != "auto") {
            double v = 0.0;
            if (!parse_double(lambda_s, v)) {
                throw exit_error(2, "--lambda must be a number or 'auto', got '" + lambda_s + "'");
            }
            c.lambda = v;
        }
        c.split = r.num(o_split, split, "split", 0.8);
        c.washout = r.u64(o_washout, washout, "washout", 50);
        c.master_seed = r.u64(o_seed, seed, "seed", 0);
        c.resample_mask = r.flag(o_resample_mask, "resample_mask", false);

        manifest.set("model", model);
        manifest.set_u64("seed", c.master_seed);
        manifest.set_u64("segments", c.task.segments);
        manifest.set_u64("samples_per_period", c.task.samples_per_period);
        manifest.set_double("class_balance", c.task.class_balance);
        manifest.set_u64("n_virtual", c.rc.n_virtual);
        manifest.set_double("theta", c.rc.theta);
        manifest.set_double("zeta_bias", c.rc.zeta_bias);
        manifest.set_double("zeta_span", c.rc.zeta_span);
        manifest.set_double("s_init", c.rc.s_init);
        manifest.set("snr_db", c.snr_db ? fmt_g17(*c.snr_db) : "clean");
        manifest.set("lambda", c.lambda ? fmt_g17(*c.lambda) : "auto");
        manifest.set_double("split", c.split);
        manifest.set_u64("washout", c.washout);
        manifest.set_u64("resample_mask", c.resample_mask ? 1 : 0);
        return c;
    }
};

// ---------------------------------------------------------------------------
// trace
// ---------------------------------------------------------------------------

struct TraceCmd {
    std::string config_path;
    std::string out = ".";
    std::string model_spec = "default";
    double alpha = 0.0, beta = 0.0, n = 2.0, zeta = 0.0;
    double s0 = 0.01, t_end = 0.0;
    std::size_t points = 200;
    bool svg = false;

    CLI::Option *o_config{}, *o_out{}, *o_model{}, *o_alpha{}, *o_beta{}, *o_n{}, *o_zeta{},
        *o_s0{}, *o_t_end{}, *o_points{}, *o_svg{};

    void attach(CLI::App* cmd) {
        o_config = cmd->add_option("--config", config_path, "Config file");
        o_out = cmd->add_option("--out", out, "Output directory");
        o_model = cmd->add_option("--model", model_spec, "Device model file or 'default'");
        o_alpha = cmd->add_option("--alpha", alpha, "Linear rate, 1/s");
        o_beta = cmd->add_option("--beta", beta, "Nonlinear rate, 1/s");
        o_n = cmd->add_option("--n", n, "Nonlinearity exponent");
        o_zeta = cmd->add_option("--zeta", zeta, "Drive current (uses --model)");
        o_s0 = cmd->add_option("--s0", s0, "Initial orbit");
        o_t_end = cmd->add_option("--t-end", t_end, "Trace horizon, seconds");
        o_points = cmd->add_option("--points", points, "Grid points");
        o_svg = cmd->add_flag("--svg", svg, "Also write trace.svg");
    }

    int run() const {
        const Resolver r(load_config_opt(config_path));
        KeyValueConfig manifest;
        manifest.set("command", "trace");

        ThieleParams p;
        const bool via_model = r.has(o_zeta, "zeta");
        const bool direct = r.has(o_alpha, "alpha") || r.has(o_beta, "beta");
        if (via_model && direct) {
            throw exit_error(2, "give either --alpha/--beta/--n or --model with --zeta, not both");
        }
        if (via_model) {
            const std::string spec = r.str(o_model, model_spec, "model", "default");
            const double z = r.num(o_zeta, zeta, "zeta", 0.0);
            p = resolve_model(spec).params_for_current(z);
            manifest.set("model", spec);
            manifest.set_double("zeta", z);
        } else if (direct) {
            if (!r.has(o_alpha, "alpha") || !r.has(o_beta, "beta")) {
                throw exit_error(2, "direct parameters need both --alpha and --beta");
            }
            p.alpha = r.num(o_alpha, alpha, "alpha", 0.0);
            p.beta = r.num(o_beta, beta, "beta", 0.0);
            p.n = r.num(o_n, n, "n", 2.0);
            manifest.set_double("alpha", p.alpha);
            manifest.set_double("beta", p.beta);
            manifest.set_double("n", p.n);
        } else {
            throw exit_error(2, "trace needs --alpha/--beta/--n or --model FILE --zeta Z");
        }

        const double s_start = r.num(o_s0, s0, "s0", 0.01);
        const std::size_t n_points = r.u64(o_points, points, "trace_points", 200);
        const double horizon = r.num(o_t_end, t_end, "t_end", 0.0);
        if (n_points < 1) {
            throw exit_error(2, "--points must be >= 1");
        }
        if (n_points > 1 && !(horizon > 0.0)) {
            throw exit_error(2, "--t-end must be > 0 for more than one point");
        }
        manifest.set_double("s0", s_start);
        manifest.set_double("t_end", horizon);
        manifest.set_u64("trace_points", n_points);
        manifest.set_u64("svg", (o_svg->count() > 0 || r.flag(nullptr, "svg", false)) ? 1 : 0);

        const std::vector<double> grid =
            n_points == 1 ? std::vector<double>{0.0} : linspace(0.0, horizon, n_points);
        const TraceResult tr = trace(p, s_start, grid);

        const fs::path dir = prepare_out_dir(r.str(o_out, out, "out", "."));
        {
            std::ofstream csv(dir / "trace.csv");
            csv << "t,s\n";
            for (std::size_t i = 0; i < tr.s.size(); ++i) {
                csv << fmt_g17(grid[i]) << ',' << fmt_g17(tr.s[i]) << '\n';
            }
        }
        write_manifest(dir, manifest);

        if (manifest.get_u64("svg", 0) != 0) {
            SvgSeries series{.name = "s(t)",
                             .x = {grid.begin(), grid.begin() + static_cast<long>(tr.s.size())},
                             .y = tr.s};
            std::ofstream svg_out(dir / "trace.svg");
            write_svg_chart(svg_out, {.title = "Reduced vortex-core position",
                                      .x_label = "t (s)",
                                      .y_label = "s"},
                            {&series, 1});
        }

        if (!tr.complete()) {
            std::cerr << "trace: orbit blow-up at t* = " << fmt_g17(tr.blow_up_time)
                      << " (grid index " << *tr.blow_up_index << ", t = "
                      << fmt_g17(grid[*tr.blow_up_index]) << ")\n";
            return 3;
        }
        std::cout << "trace: " << tr.s.size() << " points -> " << (dir / "trace.csv").string()
                  << '\n';
        return 0;
    }
};

// ---------------------------------------------------------------------------
// trial
// ---------------------------------------------------------------------------

struct TrialCmd {
    TrialOpts opts;
    std::uint64_t rep = 0;
    std::string dump_signal, dump_states, dump_weights;
    CLI::Option* o_rep = nullptr;

    void attach(CLI::App* cmd) {
        opts.attach(cmd);
        o_rep = cmd->add_option("--rep", rep, "Repetition index");
        cmd->add_option("--dump-signal", dump_signal, "Write the (noisy) input signal CSV");
        cmd->add_option("--dump-states", dump_states, "Write the reservoir state matrix CSV");
        cmd->add_option("--dump-weights", dump_weights, "Write the readout weights CSV");
    }

    int run() const {
        const Resolver r(load_config_opt(opts.config_path));
        KeyValueConfig manifest;
        manifest.set("command", "trial");
        const TrialConfig c = opts.resolve(r, manifest);
        const std::uint64_t rep_index = r.u64(o_rep, rep, "rep", 0);
        manifest.set_u64("rep", rep_index);

        const TrialArtifacts art = run_trial_artifacts(c, rep_index);

        const fs::path dir = prepare_out_dir(r.str(opts.o_out, opts.out, "out", "."));
        write_manifest(dir, manifest);
        const auto dump = [&](const std::string& path, auto&& writer) {
            if (path.empty()) return;
            std::ofstream f(path);
            writer(f);
        };
        dump(dump_signal, [&](std::ostream& f) { write_csv(art.signal, f); });
        dump(dump_states, [&](std::ostream& f) { write_csv(art.states, f); });
        dump(dump_weights, [&](std::ostream& f) { write_csv(art.weights, f); });

        std::cout << "accuracy=" << fmt_g17(art.metrics.accuracy) << '\n'
                  << "rmse=" << fmt_g17(art.metrics.rmse) << '\n';
        return 0;
    }
};

// ---------------------------------------------------------------------------
// sweep
// ---------------------------------------------------------------------------

struct SweepCmd {
    TrialOpts opts;
    std::string axis = "snr";
    double from = -20.0, to = 40.0;
    std::size_t points = 25, reps = 200;
    long long threads = 0;
    bool fit = false, svg = false;
    CLI::Option *o_axis{}, *o_from{}, *o_to{}, *o_points{}, *o_reps{}, *o_threads{}, *o_fit{},
        *o_svg{};

    void attach(CLI::App* cmd) {
        opts.attach(cmd);
        o_axis = cmd->add_option("--axis", axis, "Sweep axis: current | snr");
        o_from = cmd->add_option("--from", from, "First axis value");
        o_to = cmd->add_option("--to", to, "Last axis value");
        o_points = cmd->add_option("--points", points, "Axis points");
        o_reps = cmd->add_option("--reps", reps, "Repetitions per point");
        o_threads = cmd->add_option("--threads", threads, "Worker threads (0 = auto)");
        o_fit = cmd->add_flag("--fit", fit, "Fit a generalized logistic to mean accuracy");
        o_svg = cmd->add_flag("--svg", svg, "Also write sweep.svg");
    }

    int run() const {
        const Resolver r(load_config_opt(opts.config_path));
        KeyValueConfig manifest;
        manifest.set("command", "sweep");
        const TrialConfig base = opts.resolve(r, manifest);

        const std::string axis_s = r.str(o_axis, axis, "axis", "snr");
        SweepAxis ax;
        if (axis_s == "current") {
            ax = SweepAxis::Current;
        } else if (axis_s == "snr") {
            ax = SweepAxis::Snr;
        } else {
            throw exit_error(2, "--axis must be 'current' or 'snr', got '" + axis_s + "'");
        }
        const double v_from = r.num(o_from, from, "from", ax == SweepAxis::Snr ? -20.0 : 1.05);
        const double v_to = r.num(o_to, to, "to", ax == SweepAxis::Snr ? 40.0 : 2.0);
        const std::size_t n_points = r.u64(o_points, points, "points", ax == SweepAxis::Snr ? 25 : 20);
        const std::size_t n_reps = r.u64(o_reps, reps, "reps", 200);
        const unsigned n_threads = resolve_threads(o_threads, threads, r);
        const bool do_fit = r.flag(o_fit, "fit", false);
        const bool do_svg = r.flag(o_svg, "svg", false);
        if (n_points < 1) throw exit_error(2, "--points must be >= 1");
        if (n_reps < 1) throw exit_error(2, "--reps must be >= 1");

        manifest.set("axis", axis_s);
        manifest.set_double("from", v_from);
        manifest.set_double("to", v_to);
        manifest.set_u64("points", n_points);
        manifest.set_u64("reps", n_reps);
        manifest.set_u64("threads", n_threads);
        manifest.set_u64("fit", do_fit ? 1 : 0);
        manifest.set_u64("svg", do_svg ? 1 : 0);

        const std::vector<double> values = linspace(v_from, v_to, n_points);
        const SweepResult result = sweep(base, ax, values, n_reps, n_threads);

        std::optional<LogisticFit> lfit;
        if (do_fit) {
            std::vector<double> fx, fy;
            for (std::size_t i = 0; i < result.axis.size(); ++i) {
                if (result.valid[i]) {
                    fx.push_back(result.axis[i]);
                    fy.push_back(result.mean_accuracy[i]);
                }
            }
            if (fx.size() >= 6) {
                lfit = fit_logistic(fx, fy);
            } else {
                std::cerr << "sweep: too few valid points for a logistic fit\n";
            }
        }

        const fs::path dir = prepare_out_dir(r.str(opts.o_out, opts.out, "out", "."));
        {
            std::ofstream csv(dir / "sweep.csv");
            write_csv(result, csv, lfit ? &*lfit : nullptr);
        }
        write_manifest(dir, manifest);

        if (do_svg) {
            std::vector<SvgSeries> series;
            SvgSeries mean{.name = "mean accuracy", .x = result.axis, .y = result.mean_accuracy};
            SvgSeries hi{.name = "mean + std", .color = "#999999", .dashed = true};
            SvgSeries lo{.name = "mean - std", .color = "#999999", .dashed = true};
            for (std::size_t i = 0; i < result.axis.size(); ++i) {
                hi.x.push_back(result.axis[i]);
                hi.y.push_back(result.mean_accuracy[i] + result.std_accuracy[i]);
                lo.x.push_back(result.axis[i]);
                lo.y.push_back(result.mean_accuracy[i] - result.std_accuracy[i]);
            }
            series.push_back(std::move(mean));
            series.push_back(std::move(hi));
            series.push_back(std::move(lo));
            if (lfit) {
                SvgSeries fs_{.name = "logistic fit", .color = "#e377c2"};
                for (double x : linspace(result.axis.front(), result.axis.back(), 200)) {
                    fs_.x.push_back(x);
                    fs_.y.push_back((*lfit)(x));
                }
                series.push_back(std::move(fs_));
            }
            std::ofstream svg_out(dir / "sweep.svg");
            const char* xlabel = ax == SweepAxis::Snr ? "SNR (dB)" : "zeta bias";
            write_svg_chart(svg_out,
                            {.title = "Waveform recognition sweep",
                             .x_label = xlabel,
                             .y_label = "accuracy"},
                            series);
        }

        const std::size_t invalid = result.invalid_count();
        std::cout << "sweep: " << result.axis.size() << " points x " << n_reps << " reps -> "
                  << (dir / "sweep.csv").string() << " (" << invalid << " invalid)\n";
        for (std::size_t i = 0; i < result.axis.size(); ++i) {
            if (!result.valid[i]) {
                std::cerr << "  point " << i << " (axis " << fmt_g17(result.axis[i])
                          << "): " << result.errors[i] << '\n';
            }
        }
        if (2 * invalid > result.axis.size()) {
            std::cerr << "sweep: more than half of the points are invalid\n";
            return 4;
        }
        return 0;
    }
};

// ---------------------------------------------------------------------------
// fit
// ---------------------------------------------------------------------------

struct FitCmd {
    std::string input;
    std::string column = "mean_accuracy";
    std::string out = ".";

    void attach(CLI::App* cmd) {
        cmd->add_option("--input", input, "Sweep CSV to fit")->required();
        cmd->add_option("--column", column, "Y column name");
        cmd->add_option("--out", out, "Output directory");
    }

    int run() const {
        std::ifstream in(input);
        if (!in) {
            throw exit_error(2, "cannot open '" + input + "'");
        }
        std::string line;
        if (!std::getline(in, line)) {
            throw exit_error(2, "empty CSV '" + input + "'");
        }
        const auto split = [](const std::string& s) {
            std::vector<std::string> cells;
            std::stringstream ss(s);
            std::string cell;
            while (std::getline(ss, cell, ',')) cells.push_back(cell);
            return cells;
        };
        const auto header = split(line);
        long xi = -1, yi = -1, vi = -1;
        for (std::size_t i = 0; i < header.size(); ++i) {
            if (header[i] == "axis") xi = static_cast<long>(i);
            if (header[i] == column) yi = static_cast<long>(i);
            if (header[i] == "valid") vi = static_cast<long>(i);
        }
        if (xi < 0 || yi < 0) {
            throw exit_error(2, "CSV lacks 'axis' or '" + column + "' column");
        }

        std::vector<double> x, y;
        while (std::getline(in, line)) {
            if (line.empty() || line.front() == '#') continue;
            const auto cells = split(line);
            if (vi >= 0 && static_cast<std::size_t>(vi) < cells.size() && cells[vi] == "0") {
                continue;
            }
            double xv = 0.0, yv = 0.0;
            if (static_cast<std::size_t>(std::max(xi, yi)) >= cells.size() ||
                !parse_double(cells[xi], xv) || !parse_double(cells[yi], yv)) {
                throw exit_error(2, "malformed CSV row: '" + line + "'");
            }
            x.push_back(xv);
            y.push_back(yv);
        }
        if (x.size() < 6) {
            throw exit_error(2, "need at least 6 valid rows to fit, got " +
                                    std::to_string(x.size()));
        }

        const LogisticFit f = fit_logistic(x, y);
        std::ostringstream block;
        block << "A=" << fmt_g17(f.A) << '\n'
              << "K=" << fmt_g17(f.K) << '\n'
              << "B=" << fmt_g17(f.B) << '\n'
              << "M=" << fmt_g17(f.M) << '\n'
              << "nu=" << fmt_g17(f.nu) << '\n'
              << "r_squared=" << fmt_g17(f.r_squared) << '\n'
              << "degenerate=" << (f.degenerate ? 1 : 0) << '\n';
        std::cout << block.str();

        const fs::path dir = prepare_out_dir(out);
        std::ofstream txt(dir / "fit.txt");
        txt << block.str();
        KeyValueConfig manifest;
        manifest.set("command", "fit");
        manifest.set("input", input);
        manifest.set("column", column);
        write_manifest(dir, manifest);
        return 0;
    }
};

// ---------------------------------------------------------------------------
// bench
// ---------------------------------------------------------------------------

struct BenchCmd {
    double alpha = 5e7, beta = -3e8, n = 2.0, s0 = 0.01;
    double t_end = 100e-9, rk4_step = 1e-12;

    void attach(CLI::App* cmd) {
        cmd->add_option("--alpha", alpha, "Linear rate, 1/s");
        cmd->add_option("--beta", beta, "Nonlinear rate, 1/s");
        cmd->add_option("--n", n, "Nonlinearity exponent");
        cmd->add_option("--s0", s0, "Initial orbit");
        cmd->add_option("--t-end", t_end, "Evolution horizon, seconds");
        cmd->add_option("--rk4-step", rk4_step, "RK4 step, seconds");
    }

    int run() const {
        if (!(rk4_step > 0.0)) {
            throw exit_error(2, "--rk4-step must be > 0");
        }
        if (!(t_end > 0.0)) {
            throw exit_error(2, "--t-end must be > 0");
        }
        SpeedReport rep;
        try {
            rep = bench_speed({.alpha = alpha, .beta = beta, .n = n}, s0, t_end, rk4_step);
        } catch (const std::invalid_argument& e) {
            throw exit_error(2, e.what());
        }
        if (rep.timer_warning) {
            std::cerr << "warning: closed-form eval near timer resolution (median < 5 ns)\n";
        }
        std::cout << "closed_ns_per_eval=" << fmt_g17(rep.closed_ns_per_eval) << '\n'
                  << "rk4_ns_per_trace=" << fmt_g17(rep.rk4_ns_per_trace) << '\n'
                  << "speedup=" << fmt_g17(rep.speedup) << '\n';
        return 0;
    }
};

// ---------------------------------------------------------------------------
// model-check
// ---------------------------------------------------------------------------

struct ModelCheckCmd {
    std::string model_spec;

    void attach(CLI::App* cmd) {
        cmd->add_option("--model", model_spec, "Device model file or 'default'")->required();
    }

    int run() const {
        const DeviceModel m = resolve_model(model_spec);
        std::cout << "model: "
                  << (m.kind() == DeviceModel::Kind::SyntheticDefault ? "synthetic-default"
                                                                      : "polynomial-from-file")
                  << '\n';
        std::cout << "zeta_range [" << fmt_g17(m.zeta_min()) << ", " << fmt_g17(m.zeta_max())
                  << "]\n";
        std::cout << "degrees alpha=" << m.alpha().coeffs.size() - 1
                  << " beta=" << m.beta().coeffs.size() - 1 << " n=" << m.n().coeffs.size() - 1
                  << '\n';
        for (double z : {m.zeta_min(), 0.5 * (m.zeta_min() + m.zeta_max()), m.zeta_max()}) {
            const ThieleParams p = m.params_for_current(z);
            std::cout << "zeta=" << fmt_g17(z) << " alpha=" << fmt_g17(p.alpha)
                      << " beta=" << fmt_g17(p.beta) << " n=" << fmt_g17(p.n);
            const auto ss = steady_state(p);
            if (ss) {
                std::cout << " steady_state=" << fmt_g17(*ss);
            } else {
                std::cout << " steady_state=none";
            }
            std::cout << '\n';
        }
        std::cout << "model OK\n";
        return 0;
    }
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spin-torque vortex oscillator reservoir-computing simulator"};
    app.set_version_flag("--version", std::string("ddtea ") + kVersion);
    app.require_subcommand(1);

    TraceCmd trace_cmd;
    trace_cmd.attach(app.add_subcommand("trace", "Closed-form orbit trace to CSV"));
    TrialCmd trial_cmd;
    trial_cmd.attach(app.add_subcommand("trial", "One classification trial"));
    SweepCmd sweep_cmd;
    sweep_cmd.attach(app.add_subcommand("sweep", "Accuracy/RMSE sweep over current or SNR"));
    FitCmd fit_cmd;
    fit_cmd.attach(app.add_subcommand("fit", "Generalized logistic fit of a sweep CSV"));
    BenchCmd bench_cmd;
    bench_cmd.attach(app.add_subcommand("bench", "Closed form vs RK4 speed benchmark"));
    ModelCheckCmd model_check_cmd;
    model_check_cmd.attach(app.add_subcommand("model-check", "Validate a device model file"));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (app.got_subcommand("trace")) return trace_cmd.run();
        if (app.got_subcommand("trial")) return trial_cmd.run();
        if (app.got_subcommand("sweep")) return sweep_cmd.run();
        if (app.got_subcommand("fit")) return fit_cmd.run();
        if (app.got_subcommand("bench")) return bench_cmd.run();
        if (app.got_subcommand("model-check")) return model_check_cmd.run();
    } catch (const exit_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return e.code;
    } catch (const parse_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const validation_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::out_of_range& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
    return 0;
}
