#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <regex>
#include <sstream>

#include "arps/error.hpp"
#include "arps/experiments.hpp"

using namespace arps;

namespace {

SweepGrid one_point(double rho, int n, double b) { return SweepGrid{{rho}, {n}, {b}}; }

std::vector<double> attr_values(const std::string& svg, const std::string& cls, const std::string& attr) {
    std::vector<double> out;
    const std::regex re("<[a-z]+ [^>]*class=\"" + cls + "\"[^>]*>");
    const std::regex val(attr + "=\"([-0-9.eE+]+)\"");
    for (auto it = std::sregex_iterator(svg.begin(), svg.end(), re); it != std::sregex_iterator(); ++it) {
        std::smatch m;
        const std::string tag = it->str();
        if (std::regex_search(tag, m, val)) out.push_back(std::stod(m[1]));
    }
    return out;
}

std::size_t count(const std::string& s, const std::string& needle) {
    std::size_t n = 0;
    for (auto p = s.find(needle); p != std::string::npos; p = s.find(needle, p + 1)) ++n;
    return n;
}

}  // namespace

TEST_CASE("grids") {
    CHECK(SweepGrid::standard().size() == 60u);
    CHECK(SweepGrid::dense().size() == 11u * 4u * 9u);
    CHECK_NOTHROW(SweepGrid::standard().validate(false));
    CHECK_THROWS_AS(one_point(-1.0, 1, 1.0).validate(true), Error);
    CHECK_THROWS_AS(one_point(0.0, 5, 1.0).validate(false), Error);
    CHECK_NOTHROW(one_point(0.0, 5, 1.0).validate(true));
    CHECK_THROWS_AS((SweepGrid{{}, {1}, {1.0}}.validate(false)), Error);
}

TEST_CASE("sweep single points") {
    const SweepSettings s = SweepSettings::defaults(SweepController::Arps);
    const SweepResult r = run_sweep(one_point(0.0, 1, 1.0), s);
    REQUIRE(r.entries.size() == 1u);
    CHECK(r.entries[0].status == SweepStatus::Reached);
    REQUIRE(r.entries[0].t_bar.has_value());
    CHECK(*r.entries[0].t_bar < 0.1);
    CHECK(r.horizon_T_c == 0.1);
    CHECK(r.all_reached());

    const SweepResult big = run_sweep(one_point(1000.0, 4, 9.0), s);
    REQUIRE(big.entries[0].t_bar.has_value());
    CHECK(*big.entries[0].t_bar < 0.1);
}

TEST_CASE("sweep order and determinism are independent of worker count") {
    const SweepGrid g{{0.0, 1000.0}, {1, 2}, {1.0, 9.0}};
    SweepSettings s = SweepSettings::defaults(SweepController::Arps);
    s.workers = 1;
    const SweepResult a = run_sweep(g, s);
    s.workers = 3;
    const SweepResult b = run_sweep(g, s);
    REQUIRE(a.entries.size() == 8u);
    REQUIRE(b.entries.size() == 8u);
    std::size_t k = 0;
    for (double rho : g.rho_values)
        for (int n : g.n_values)
            for (double bb : g.b_values) {
                CHECK(a.entries[k].rho == rho);
                CHECK(a.entries[k].n == n);
                CHECK(a.entries[k].b == bb);
                CHECK(a.entries[k].t_bar == b.entries[k].t_bar);
                ++k;
            }
}

TEST_CASE("sweep reports unreached points") {
    SweepSettings s = SweepSettings::defaults(SweepController::Baseline);
    s.sim.t_end = 1e-4;
    const SweepResult r = run_sweep(one_point(1000.0, 4, 9.0), s);
    CHECK(r.entries[0].status == SweepStatus::HorizonExceeded);
    CHECK_FALSE(r.entries[0].t_bar.has_value());
    CHECK_FALSE(r.all_reached());
    CHECK_FALSE(r.horizon_T_c.has_value());
}

TEST_CASE("sweep csv") {
    SweepResult empty;
    std::ostringstream a;
    write_sweep_csv(empty, a);
    CHECK(a.str() == "rho,n,b,t_bar,status\n");

    SweepResult one;
    one.entries.push_back(SweepEntry{250.0, 2, 5.0, 0.0625, SweepStatus::Reached, ""});
    one.entries.push_back(SweepEntry{0.0, 1, 1.0, std::nullopt, SweepStatus::HorizonExceeded, ""});
    std::ostringstream b;
    write_sweep_csv(one, b);
    CHECK(b.str() == "rho,n,b,t_bar,status\n250,2,5,0.0625,Reached\n0,1,1,,HorizonExceeded\n");
}

TEST_CASE("rt surface svg") {
    SweepResult r;
    r.horizon_T_c = 0.1;
    r.entries.push_back(SweepEntry{0.0, 1, 1.0, 0.09, SweepStatus::Reached, ""});
    const std::string svg = render_svg(r);
    CHECK(svg.find("<svg") != std::string::npos);
    CHECK(svg.find("</svg>") != std::string::npos);
    CHECK(count(svg, "class=\"mark\"") == 1u);
    CHECK(count(svg, "ref-Tc") >= 1u);

    const SweepResult full = run_sweep(SweepGrid::standard(), SweepSettings::defaults(SweepController::Arps));
    const std::string s = render_svg(full);
    const auto marks = attr_values(s, "mark", "cy");
    const auto ref = attr_values(s, "ref-Tc", "y1");
    CHECK(marks.size() == 60u);
    REQUIRE(ref.size() == 1u);
    // SVG y grows downward.
    for (double y : marks) CHECK(y > ref.front());
}

TEST_CASE("plot kind names") {
    for (PlotKind k : {PlotKind::RTSurface, PlotKind::NormTrace, PlotKind::GainTrace, PlotKind::InputTrace}) {
        CHECK(plot_kind_from_string(to_string(k)) == k);
    }
    CHECK_THROWS_AS(plot_kind_from_string("phase"), Error);
}

TEST_CASE("mean_lambda and envelope") {
    TimeSeries ts;
    ts.m = 1;
    for (int k = 0; k <= 10; ++k) {
        ts.samples.push_back(Sample{k * 1.0, Vec{1.0}, 1.0, k * 2.0, 0.0, k < 5 ? 1.0 : 3.0 - 0.1 * k});
    }
    CHECK(mean_lambda(ts, 2.0, 4.0) == doctest::Approx(6.0));
    CHECK_FALSE(mean_lambda(ts, 20.0, 30.0).has_value());
    const std::vector<double> bp{5.0};
    const auto env = disturbance_envelope(ts, bp);
    REQUIRE(env.size() == ts.samples.size());
    CHECK(env[0] == 1.0);
    CHECK(env[4] == 1.0);
    CHECK(env[5] == doctest::Approx(2.5));
    CHECK(env[10] == doctest::Approx(2.5));
}

TEST_CASE("scenario 2: barrier phase holds and the gain tracks the disturbance") {
    const ScenarioReport r = run_scenario2(ScenarioOptions{});
    REQUIRE(r.t_bar.has_value());
    CHECK(*r.t_bar < 1.0);
    CHECK(r.max_norm_after_switch < r.epsilon);
    CHECK(r.passed());

    // Settled bound eps beta*/(1 + beta*), beta* = d / (1 + q1) over the barrier region.
    const SimulationCase c = scenario2_case(ScenarioOptions{});
    const auto ts = linspace(0.0, 9.0, 9001);
    const auto ss = box_grid(2, -0.05, 0.05, 5);
    const AssumptionReport a = check_assumptions(c.plant, c.disturbance, ts, ss);
    const double beta_star = a.d_est / (1.0 + a.q1_est);
    const double s_bound = barrier_root_s(BarrierSpec{BarrierKind::PositiveSemiDefinite, 0.05, 0.0}, beta_star);
    MESSAGE("max after switch " << r.max_norm_after_switch << ", beta* " << beta_star << ", root " << s_bound);
    CHECK(r.max_norm_after_switch <= s_bound + 1e-3);

    const auto early = mean_lambda(r.result.series, 1.0, 3.0);
    const auto late = mean_lambda(r.result.series, 7.0, 9.0);
    REQUIRE(early.has_value());
    REQUIRE(late.has_value());
    CHECK(*late > *early);

    const std::string svg = render_svg(std::span<const ScenarioReport>(&r, 1), PlotKind::NormTrace);
    CHECK(count(svg, "ref-eps\"") == 1u);
    CHECK(count(svg, "ref-eps-half") == 1u);
    const std::string gain = render_svg(std::span<const ScenarioReport>(&r, 1), PlotKind::GainTrace);
    CHECK(count(gain, "trace-envelope") >= 1u);
}

TEST_CASE("scenario 1 runs reach before T_c and stay inside the barrier") {
    const auto reports = run_scenario1(ScenarioOptions{});
    REQUIRE(reports.size() == 3u);
    for (const ScenarioReport& r : reports) {
        CHECK(r.passed());
        REQUIRE(r.t_bar.has_value());
        CHECK(*r.t_bar < 1.0);
        CHECK(r.breakpoints == std::vector<double>{0.2, 0.4});
        CHECK(r.gain_stats.segments.size() == 3u);
    }
}

TEST_CASE("file output errors name the path") {
    const std::string bad = "/nonexistent-dir/x/out.csv";
    try {
        write_text_file(bad, "x");
        FAIL("expected IoError");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::IoError);
        CHECK(std::string(e.what()).find(bad) != std::string::npos);
    }
    CHECK_THROWS_AS(export_csv(SweepResult{}, bad), Error);

    const auto dir = std::filesystem::temp_directory_path() / "arps_test_experiments";
    std::filesystem::create_directories(dir);
    const std::string ok = (dir / "sweep.csv").string();
    export_csv(SweepResult{}, ok);
    CHECK(std::filesystem::file_size(ok) == std::string("rho,n,b,t_bar,status\n").size());
}
