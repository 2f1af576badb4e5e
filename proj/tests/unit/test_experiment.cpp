#include <doctest.h>

#include <cmath>
#include <sstream>

#include "ddtea/experiment.hpp"
#include "test_support.hpp"

using namespace ddtea;
using test_support::rel_diff;

namespace {

TrialConfig small_config() {
    TrialConfig c;
    c.task.segments = 40;  // 480 samples, quick
    c.master_seed = 31;
    return c;
}

}  // namespace

TEST_SUITE("experiment") {

TEST_CASE("clean default trial classifies nearly perfectly") {
    TrialConfig c;
    c.master_seed = 7;
    const Metrics m = run_trial(c, 0);
    CHECK(m.accuracy >= 0.95);
    CHECK(m.rmse < 0.5);
}

TEST_CASE("a trial repetition is bitwise reproducible") {
    TrialConfig c = small_config();
    c.snr_db = 10.0;
    const Metrics a = run_trial(c, 3);
    const Metrics b = run_trial(c, 3);
    CHECK(a.accuracy == b.accuracy);
    CHECK(a.rmse == b.rmse);

    const Metrics other_rep = run_trial(c, 4);
    CHECK((other_rep.accuracy != a.accuracy || other_rep.rmse != a.rmse));
}

TEST_CASE("deep noise drags accuracy to chance level") {
    TrialConfig c;
    c.master_seed = 11;
    c.snr_db = -20.0;
    double acc = 0.0;
    const int reps = 10;
    for (int rep = 0; rep < reps; ++rep) {
        acc += run_trial(c, static_cast<std::size_t>(rep)).accuracy;
    }
    acc /= reps;
    CHECK(acc >= 0.40);
    CHECK(acc <= 0.60);
}

TEST_CASE("trial config validation") {
    TrialConfig c = small_config();
    c.split = 1.0;
    CHECK_THROWS_AS((void)run_trial(c, 0), std::invalid_argument);

    c = small_config();
    c.washout = c.task.segments * c.task.samples_per_period;
    CHECK_THROWS_AS((void)run_trial(c, 0), std::invalid_argument);

    c = small_config();
    c.rc.zeta_bias = 2.4;
    CHECK_THROWS_AS((void)run_trial(c, 0), std::out_of_range);
}

TEST_CASE("failed stages are annotated") {
    TrialConfig c = small_config();
    c.lambda = 0.0;
    c.rc.zeta_span = 0.0;  // constant drive: saturated identical columns
    try {
        (void)run_trial(c, 0);
        FAIL("expected a rank-deficiency failure");
    } catch (const std::runtime_error& e) {
        CHECK(std::string(e.what()).find("train_ridge") != std::string::npos);
    }
}

TEST_CASE("single-point single-rep sweep equals the trial") {
    TrialConfig c = small_config();
    const std::vector<double> values{10.0};
    const SweepResult r = sweep(c, SweepAxis::Snr, values, 1, 1);
    REQUIRE(r.axis.size() == 1);
    CHECK(r.valid[0] == 1);
    CHECK(r.std_accuracy[0] == 0.0);
    CHECK(r.std_rmse[0] == 0.0);

    TrialConfig tc = c;
    tc.snr_db = 10.0;
    tc.sweep_point = 0;
    const Metrics m = run_trial(tc, 0);
    CHECK(r.mean_accuracy[0] == m.accuracy);
    CHECK(r.mean_rmse[0] == m.rmse);
}

TEST_CASE("sweep output is bitwise independent of the thread count") {
    TrialConfig c = small_config();
    const std::vector<double> values{-5.0, 5.0, 15.0};
    const SweepResult one = sweep(c, SweepAxis::Snr, values, 6, 1);
    const SweepResult four = sweep(c, SweepAxis::Snr, values, 6, 4);
    const SweepResult many = sweep(c, SweepAxis::Snr, values, 6, 16);
    CHECK(one.mean_accuracy == four.mean_accuracy);
    CHECK(one.std_accuracy == four.std_accuracy);
    CHECK(one.mean_rmse == four.mean_rmse);
    CHECK(one.std_rmse == four.std_rmse);
    CHECK(one.mean_accuracy == many.mean_accuracy);
    CHECK(one.std_rmse == many.std_rmse);
}

TEST_CASE("current-axis sweep overrides the bias point") {
    TrialConfig c = small_config();
    const std::vector<double> values{1.3, 1.7};
    const SweepResult r = sweep(c, SweepAxis::Current, values, 2, 2);
    CHECK(r.valid[0] == 1);
    CHECK(r.valid[1] == 1);

    TrialConfig tc = c;
    tc.rc.zeta_bias = 1.7;
    tc.sweep_point = 1;
    const Metrics m0 = run_trial(tc, 0);
    const Metrics m1 = run_trial(tc, 1);
    CHECK(r.mean_accuracy[1] == doctest::Approx(0.5 * (m0.accuracy + m1.accuracy)).epsilon(1e-15));
}

TEST_CASE("invalid sweep points are recorded, not fatal") {
    TrialConfig c = small_config();
    // 2.45 + span 0.3 leaves the default validity interval.
    const std::vector<double> values{1.5, 2.45};
    const SweepResult r = sweep(c, SweepAxis::Current, values, 2, 1);
    CHECK(r.valid[0] == 1);
    CHECK(r.valid[1] == 0);
    CHECK(r.errors[1].find("collect_states") != std::string::npos);
    CHECK(r.invalid_count() == 1);
}

TEST_CASE("different master seeds agree within sampling error") {
    TrialConfig a = small_config();
    a.master_seed = 100;
    TrialConfig b = small_config();
    b.master_seed = 200;
    const std::vector<double> values{0.0, 10.0};
    const std::size_t n_reps = 60;
    const SweepResult ra = sweep(a, SweepAxis::Snr, values, n_reps, 0);
    const SweepResult rb = sweep(b, SweepAxis::Snr, values, n_reps, 0);
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double sem = ra.std_accuracy[i] / std::sqrt(static_cast<double>(n_reps));
        CHECK(std::abs(ra.mean_accuracy[i] - rb.mean_accuracy[i]) <= 3.0 * sem + 0.01);
    }
}

TEST_CASE("sweep CSV format") {
    SweepResult r;
    r.axis_kind = SweepAxis::Snr;
    r.n_reps = 2;
    r.axis = {0.0, 10.0};
    r.mean_accuracy = {0.5, 0.75};
    r.std_accuracy = {0.01, 0.02};
    r.mean_rmse = {0.5, 0.25};
    r.std_rmse = {0.0, 0.0};
    r.valid = {1, 0};
    r.errors = {"", "boom"};

    std::ostringstream os;
    write_csv(r, os);
    std::istringstream is(os.str());
    std::string line;
    std::getline(is, line);
    CHECK(line == "axis,mean_accuracy,std_accuracy,mean_rmse,std_rmse,n_reps,valid");
    std::getline(is, line);
    CHECK(line == "0,0.5,0.01,0.5,0,2,1");
    std::getline(is, line);
    CHECK(line == "10,0.75,0.02,0.25,0,2,0");

    LogisticFit fit;
    fit.A = 0.5;
    std::ostringstream os2;
    write_csv(r, os2, &fit);
    CHECK(os2.str().find("# A=0.5\n") != std::string::npos);
    CHECK(os2.str().find("# r_squared=") != std::string::npos);
}

TEST_CASE("sweep argument validation") {
    TrialConfig c = small_config();
    const std::vector<double> none{};
    CHECK_THROWS_AS((void)sweep(c, SweepAxis::Snr, none, 1, 1), std::invalid_argument);
    const std::vector<double> one{0.0};
    CHECK_THROWS_AS((void)sweep(c, SweepAxis::Snr, one, 0, 1), std::invalid_argument);
}

TEST_CASE("speed benchmark sanity") {
    const ThieleParams p{5e7, -3e8, 2.0};

    SUBCASE("closed form wins big against a fine-step trace") {
        const SpeedReport rep = bench_speed(p, 0.01, 100e-9, 1e-12);
        CHECK(rep.closed_ns_per_eval > 0.0);
        CHECK(rep.rk4_ns_per_trace > 0.0);
        CHECK(rep.speedup >= 100.0);
    }

    SUBCASE("single-step RK4 is within a constant factor") {
        const SpeedReport rep = bench_speed(p, 0.01, 100e-9, 100e-9);
        CHECK(rep.speedup >= 0.1);
    }

    SUBCASE("invalid steps and blow-ups are rejected") {
        CHECK_THROWS_AS((void)bench_speed(p, 0.01, 100e-9, 0.0), std::invalid_argument);
        CHECK_THROWS_AS((void)bench_speed({1.0, 1.0, 2.0}, 1.0, 1.0, 1e-3),
                        std::invalid_argument);
    }
}

}  // TEST_SUITE
