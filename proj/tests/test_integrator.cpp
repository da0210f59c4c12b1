#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <sstream>

#include "arps/error.hpp"
#include "arps/integrator.hpp"

using namespace arps;

namespace {

// sigma' = u + f with a constant drift.
PlantSpec simple_plant(Vec drift) {
    PlantSpec p;
    p.name = "simple";
    p.m = drift.size();
    p.eval_G = [m = p.m](double, const Vec&) { return Mat::identity(m); };
    p.eval_dg = [m = p.m](double, const Vec&) { return Mat(m); };
    p.eval_f = [drift](double, const Vec&, const DisturbanceParams&) { return drift; };
    return p;
}

Controller fixed_gain(double lambda) {
    // k_hat' = K_bar ||sigma|| with a negligible K_bar keeps Lambda = k0 for one step.
    return BaselineController{BaselineParams{1e-300, lambda}, 0.05};
}

Controller arps_sweep_controller() { return ArpsController{ArpsParams{0.4, 0.1, 0.0}, 0.05}; }

SimConfig reach_only(double dt, double t_end) {
    SimConfig c;
    c.dt = dt;
    c.t_end = t_end;
    c.stop_at_reach = true;
    c.record_stride = 1000000000;
    return c;
}

bool bit_equal(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

}  // namespace

TEST_CASE("step examples") {
    const DisturbanceParams d;
    SimConfig cfg;
    cfg.dt = 0.1;

    StepOutcome rest = step(StateVector{Vec{1.0, 0.0}, 0.0}, GainState{}, simple_plant(Vec{0.0, 0.0}),
                            d, fixed_gain(0.0), cfg);
    CHECK(rest.state.sigma == (Vec{1.0, 0.0}));
    CHECK(rest.state.t == doctest::Approx(0.1));

    GainState g;
    g.k_hat = 1.0;
    StepOutcome one = step(StateVector{Vec{1.0, 0.0}, 0.0}, g, simple_plant(Vec{0.0, 0.0}), d,
                           fixed_gain(1.0), cfg);
    CHECK(one.state.sigma[0] == doctest::Approx(0.9));
    CHECK(one.state.sigma[1] == 0.0);

    StepOutcome drift = step(StateVector{Vec{1.0, 0.0}, 0.0}, GainState{}, simple_plant(Vec{2.0, 0.0}),
                             d, fixed_gain(0.0), cfg);
    CHECK(drift.state.sigma[0] == doctest::Approx(1.2));
}

TEST_CASE("step integrates the adaptive gain") {
    const DisturbanceParams d;
    SimConfig cfg;
    cfg.dt = 0.1;
    const StepOutcome s = step(StateVector{Vec{3.0, 4.0}, 0.0}, GainState{}, simple_plant(Vec{0.0, 0.0}),
                               d, BaselineController{BaselineParams{100.0, 0.0}, 0.05}, cfg);
    CHECK(s.gains.k_hat == doctest::Approx(0.1 * 100.0 * 5.0));
    const StepOutcome a = step(StateVector{Vec{3.0, 4.0}, 0.0}, GainState{}, simple_plant(Vec{0.0, 0.0}),
                               d, arps_sweep_controller(), SimConfig{0.01, 1.0, 1});
    CHECK(a.gains.beta_hat == doctest::Approx(0.05));
}

TEST_CASE("step reports overflow") {
    SimConfig cfg;
    cfg.dt = 10.0;
    try {
        step(StateVector{Vec{1.0, 0.0}, 0.0}, GainState{}, simple_plant(Vec{1e308, 0.0}),
             DisturbanceParams{}, fixed_gain(0.0), cfg);
        FAIL("expected NonFiniteState");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NonFiniteState);
    }
}

TEST_CASE("simulate: ARPS reaches before T_c at the extreme grid point") {
    DisturbanceParams d;
    d.rho = 1000.0;
    const SimResult r = simulate(revisited_plant(), d, arps_sweep_controller(),
                                 StateVector{symmetric_initial(4, 9), 0.0}, reach_only(1e-6, 0.1));
    CHECK(r.status == Termination::StoppedAtReach);
    REQUIRE(r.reach.has_value());
    CHECK(r.reach->t_bar < 0.1);
    CHECK(r.reach->norm_at_event <= 0.025);

    d.rho = 0.0;
    const SimResult r0 = simulate(revisited_plant(), d, arps_sweep_controller(),
                                  StateVector{symmetric_initial(4, 9), 0.0}, reach_only(1e-6, 0.1));
    REQUIRE(r0.reach.has_value());
    CHECK(r0.reach->t_bar < 0.1);
}

TEST_CASE("simulate: baseline reaching time grows with the initial norm" * doctest::may_fail()) {
    // The baseline law as modelled reaches faster from larger initial
    // conditions, so this ordering does not hold (see README).
    DisturbanceParams d;
    d.rho = 1000.0;
    const Controller c = BaselineController{BaselineParams{100.0, 0.0}, 0.05};
    const SimResult big = simulate(motivating_plant(), d, c, StateVector{symmetric_initial(4, 9), 0.0},
                                   reach_only(1e-6, 5.0));
    const SimResult small = simulate(motivating_plant(), d, c, StateVector{symmetric_initial(1, 1), 0.0},
                                     reach_only(1e-6, 5.0));
    REQUIRE(big.reach.has_value());
    REQUIRE(small.reach.has_value());
    MESSAGE("t_bar(n=4,b=9) = " << big.reach->t_bar << ", t_bar(n=1,b=1) = " << small.reach->t_bar);
    CHECK(big.reach->t_bar > small.reach->t_bar);
}

TEST_CASE("simulate: guard before T_c") {
    DisturbanceParams d;
    SimConfig cfg;
    cfg.dt = 0.05;
    cfg.t_end = 1.0;
    const SimResult r = simulate(revisited_plant(), d, arps_sweep_controller(),
                                 StateVector{symmetric_initial(3, 1), 0.0}, cfg);
    CHECK(r.status == Termination::TimeHorizonExceeded);
    CHECK_FALSE(r.reach.has_value());
    CHECK(r.message.find("T_c") != std::string::npos);
    CHECK(is_fault(r.status));
    CHECK(r.series.samples.size() >= 1u);
}

TEST_CASE("simulate: barrier breach is a fault") {
    SimConfig cfg;
    cfg.dt = 0.01;
    cfg.t_end = 1.0;
    cfg.record_stride = 1;
    const Controller h = HybridController{ArpsParams{0.4, 1.0, 0.0},
                                          BarrierSpec{BarrierKind::PositiveSemiDefinite, 0.05, 0.0}};
    const SimResult r = simulate(simple_plant(Vec{10.0, 0.0}), DisturbanceParams{}, h,
                                 StateVector{Vec{0.02, 0.0}, 0.0}, cfg);
    CHECK(r.status == Termination::BarrierBreached);
    REQUIRE(r.reach.has_value());
    CHECK(r.reach->t_bar == 0.0);
    CHECK(r.series.samples.front().mode == Mode::AdaptivePhase);
}

TEST_CASE("simulate: overflow is reported, not thrown") {
    SimConfig cfg;
    cfg.dt = 10.0;
    cfg.t_end = 100.0;
    const SimResult r = simulate(simple_plant(Vec{1e308, 0.0}), DisturbanceParams{}, fixed_gain(0.0),
                                 StateVector{Vec{1.0, 0.0}, 0.0}, cfg);
    CHECK(r.status == Termination::NonFiniteState);
}

TEST_CASE("simulate: origin deadzone keeps the state at rest") {
    SimConfig cfg;
    cfg.dt = 1e-3;
    cfg.t_end = 0.01;
    cfg.record_stride = 1;
    const SimResult r = simulate(simple_plant(Vec{0.0, 0.0}), DisturbanceParams{}, arps_sweep_controller(),
                                 StateVector{Vec{0.0, 0.0}, 0.0}, cfg);
    CHECK(r.status == Termination::Completed);
    for (const Sample& s : r.series.samples) {
        CHECK(s.norm_sigma == 0.0);
        CHECK(s.norm_nu == 0.0);
    }
}

TEST_CASE("simulate: input validation") {
    SimConfig bad;
    bad.dt = 0.0;
    CHECK_THROWS_AS(simulate(revisited_plant(), DisturbanceParams{}, arps_sweep_controller(),
                             StateVector{Vec{1.0, 0.0}, 0.0}, bad),
                    Error);
    CHECK_THROWS_AS(simulate(revisited_plant(), DisturbanceParams{}, arps_sweep_controller(),
                             StateVector{Vec{1.0, 0.0, 0.0}, 0.0}, SimConfig{}),
                    Error);
    SimConfig zero_stride;
    zero_stride.record_stride = 0;
    CHECK_THROWS_AS(zero_stride.validate(), Error);
}

TEST_CASE("simulate: sample count and ordering") {
    DisturbanceParams d;
    d.rho = 10.0;
    SimConfig cfg;
    cfg.dt = 1e-5;
    cfg.t_end = 0.05;
    cfg.record_stride = 8;
    const SimResult r = simulate(revisited_plant(), d, arps_sweep_controller(),
                                 StateVector{symmetric_initial(1, 1), 0.0}, cfg);
    CHECK(r.status == Termination::Completed);
    CHECK(r.series.samples.size() == cfg.expected_samples());
    CHECK(r.series.samples.size() == static_cast<std::size_t>(std::floor(0.05 / 1e-5 / 8)) + 1);
    for (std::size_t i = 1; i < r.series.samples.size(); ++i) {
        CHECK(r.series.samples[i].t > r.series.samples[i - 1].t);
    }
}

TEST_CASE("simulate: bit-identical reruns") {
    const std::vector<Sample>* first = nullptr;
    DisturbanceParams d;
    d.rho = 500.0;
    SimConfig cfg;
    cfg.dt = 1e-6;
    cfg.t_end = 0.0999;
    const auto run = [&] {
        return simulate(revisited_plant(), d, arps_sweep_controller(),
                        StateVector{symmetric_initial(2, 5), 0.0}, cfg);
    };
    const SimResult a = run();
    const SimResult b = run();
    first = &a.series.samples;
    REQUIRE(first->size() == b.series.samples.size());
    for (std::size_t i = 0; i < first->size(); ++i) {
        const Sample& x = (*first)[i];
        const Sample& y = b.series.samples[i];
        CHECK(bit_equal(x.t, y.t));
        CHECK(bit_equal(x.sigma[0], y.sigma[0]));
        CHECK(bit_equal(x.sigma[1], y.sigma[1]));
        CHECK(bit_equal(x.lambda, y.lambda));
        CHECK(bit_equal(x.norm_f, y.norm_f));
    }
}

TEST_CASE("adaptive gains never decrease") {
    DisturbanceParams d;
    d.rho = 300.0;
    SimConfig cfg;
    cfg.dt = 1e-5;
    for (const Controller& c : {arps_sweep_controller(),
                                Controller{BaselineController{BaselineParams{100.0, 0.0}, 0.05}}}) {
        StateVector s{symmetric_initial(2, 3), 0.0};
        GainState g = initial_gains(c);
        const PlantSpec p = std::holds_alternative<ArpsController>(c) ? revisited_plant() : motivating_plant();
        for (int k = 0; k < 5000; ++k) {
            const StepOutcome o = step(s, g, p, d, c, cfg);
            CHECK(o.gains.beta_hat >= g.beta_hat);
            CHECK(o.gains.k_hat >= g.k_hat);
            s = o.state;
            g = o.gains;
        }
    }
}

TEST_CASE("hybrid controller reaches before T_c across the sweep corners") {
    const Controller h = HybridController{ArpsParams{0.4, 0.1, 0.0},
                                          BarrierSpec{BarrierKind::PositiveSemiDefinite, 0.05, 0.0}};
    for (double rho : {0.0, 500.0, 1000.0})
        for (int n : {1, 4})
            for (double b : {1.0, 9.0}) {
                DisturbanceParams d;
                d.rho = rho;
                const SimResult r = simulate(revisited_plant(), d, h,
                                             StateVector{symmetric_initial(n, b), 0.0},
                                             reach_only(1e-6, 0.1));
                REQUIRE(r.reach.has_value());
                CHECK(r.reach->t_bar < 0.1);
                CHECK(r.final_gains.mode == Mode::AdaptivePhase);
                CHECK(*r.final_gains.t_bar == r.reach->t_bar);
            }
}

TEST_CASE("halving dt moves t_bar by less than two steps") {
    for (double rho : {0.0, 1000.0})
        for (int n : {1, 4}) {
            DisturbanceParams d;
            d.rho = rho;
            const StateVector s0{symmetric_initial(n, 5), 0.0};
            const SimResult a = simulate(revisited_plant(), d, arps_sweep_controller(), s0, reach_only(1e-6, 0.1));
            const SimResult b = simulate(revisited_plant(), d, arps_sweep_controller(), s0, reach_only(5e-7, 0.1));
            REQUIRE(a.reach.has_value());
            REQUIRE(b.reach.has_value());
            CHECK(std::abs(a.reach->t_bar - b.reach->t_bar) < 2e-6);
        }
}

TEST_CASE("reach_time") {
    TimeSeries ts;
    ts.m = 1;
    for (double v : {0.01, 0.5, 0.001}) ts.samples.push_back(Sample{v * 10, Vec{v}, v, 0, 0, 0, Mode::ReachingPhase});
    CHECK(reach_time(ts, 0.025) == 0.1);

    TimeSeries mono;
    mono.m = 1;
    for (int k = 0; k < 5; ++k) mono.samples.push_back(Sample{k * 0.1, Vec{1.0 + k}, 1.0 + k, 0, 0, 0, Mode::ReachingPhase});
    CHECK_FALSE(reach_time(mono, 0.025).has_value());
}

TEST_CASE("csv schema") {
    CHECK(csv_header(2) == "t,sigma_1,sigma_2,norm_sigma,Lambda,norm_nu,norm_f,mode");
    TimeSeries ts;
    ts.m = 2;
    ts.samples.push_back(Sample{0.1, Vec{1.0 / 3.0, -2.0}, 2.0, 25.0, 25.0, 0.0, Mode::AdaptivePhase});
    std::ostringstream out;
    write_csv(ts, out);
    CHECK(out.str() ==
          "t,sigma_1,sigma_2,norm_sigma,Lambda,norm_nu,norm_f,mode\n"
          "0.10000000000000001,0.33333333333333331,-2,2,25,25,0,ASP\n");
}

TEST_CASE("symmetric initial condition") {
    const Vec v = symmetric_initial(2, 3);
    CHECK(v[0] == doctest::Approx(300.0 / std::sqrt(2.0)));
    CHECK(v[1] == -v[0]);
    CHECK(norm2(v) == doctest::Approx(300.0));
}
