#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "arps/error.hpp"
#include "arps/plants.hpp"

using namespace arps;
using std::numbers::pi;

TEST_CASE("motivating_f examples") {
    DisturbanceParams p;
    p.rho = 1.0;
    const Vec f = motivating_f(0.0, Vec{0.0, 0.0}, p);
    CHECK(f[0] == doctest::Approx(1.01));
    CHECK(f[1] == doctest::Approx(1.22));

    p.rho = 0.0;
    const Vec z = motivating_f(1.7, Vec{0.3, -2.0}, p);
    CHECK(z[0] == 0.0);
    CHECK(z[1] == 0.0);
}

TEST_CASE("motivating_f empirical bound on a dense time grid") {
    DisturbanceParams p;
    p.rho = 1.0;
    double worst = 0.0;
    for (int k = 0; k <= 100000; ++k) {
        const double t = k * 1e-4;
        worst = std::max(worst, norm2(motivating_f(t, Vec{0.0, 0.0}, p)));
    }
    MESSAGE("max ||f||/rho over [0,10] = " << worst);
    CHECK(worst <= 2.63);
    // Triangle-inequality bound with a1 = 1, b1 = 1.2.
    CHECK(worst <= std::hypot(1.41, 1.42) + 1e-12);
}

TEST_CASE("motivating_f is linear in rho") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-10.0, 10.0);
    for (int k = 0; k < 1000; ++k) {
        const double t = std::abs(u(rng));
        const Vec s{u(rng), u(rng)};
        DisturbanceParams p;
        p.rho = std::abs(u(rng)) * 50.0;
        const Vec f1 = motivating_f(t, s, p);
        p.rho *= 2.0;
        const Vec f2 = motivating_f(t, s, p);
        CHECK(f2[0] == 2.0 * f1[0]);
        CHECK(f2[1] == 2.0 * f1[1]);
    }
}

TEST_CASE("rho schedule is right-continuous and piecewise constant") {
    DisturbanceParams p;
    p.rho_schedule = RhoSchedule{{0.2, 0.4}, {80.0, 50.0, 10.0}};
    CHECK(p.rho_at(0.0) == 80.0);
    CHECK(p.rho_at(std::nextafter(0.2, 0.0)) == 80.0);
    CHECK(p.rho_at(0.2) == 50.0);
    CHECK(p.rho_at(0.3) == 50.0);
    CHECK(p.rho_at(0.4) == 10.0);
    CHECK(p.rho_at(100.0) == 10.0);

    // f evaluated at the breakpoint equals f evaluated with the new constant rho.
    DisturbanceParams flat = p;
    flat.rho_schedule.reset();
    flat.rho = 50.0;
    const Vec s{0.1, 0.2};
    const Vec a = motivating_f(0.2, s, p);
    const Vec b = motivating_f(0.2, s, flat);
    CHECK(a[0] == b[0]);
    CHECK(a[1] == b[1]);
}

TEST_CASE("inverse-rho offsets keep rho * a1 fixed") {
    DisturbanceParams p;
    p.offset_mode = OffsetMode::InverseRho;
    p.a1 = 1.0;
    p.b1 = 1.2;
    p.rho_schedule = RhoSchedule{{0.2, 0.4}, {80.0, 50.0, 10.0}};
    for (double t : {0.0, 0.25, 0.5}) {
        const double rho = p.rho_at(t);
        const Vec f = motivating_f(t, Vec{0.0, 0.0}, p);
        const double osc1 = 0.4 * std::sin(p.omega1 * t) + 0.01 * std::cos(20.0 * t);
        CHECK(f[0] == doctest::Approx(rho * (1.0 / rho + osc1)));
    }
}

TEST_CASE("schedule validation") {
    CHECK_THROWS_AS((RhoSchedule{{0.4, 0.2}, {1, 2, 3}}.validate()), Error);
    CHECK_THROWS_AS((RhoSchedule{{0.2}, {1, 2, 3}}.validate()), Error);
    CHECK_THROWS_AS((RhoSchedule{{0.2}, {1, -2}}.validate()), Error);
    DisturbanceParams p;
    p.rho = -1.0;
    CHECK_THROWS_AS(p.validate(), Error);
}

TEST_CASE("motivating_H examples") {
    const Mat h0 = motivating_H(0.0, Vec{0.0, 0.0});
    CHECK(h0(0, 0) == doctest::Approx(1.5));
    CHECK(h0(0, 1) == doctest::Approx(13.0 / 30.0));
    CHECK(h0(1, 0) == 0.0);
    // sin(0) = 0 in the printed (2,2) entry.
    CHECK(h0(1, 1) == doctest::Approx(1.2));

    const Mat hp = motivating_H(0.0, Vec{pi, 0.0});
    CHECK(hp(0, 0) == doctest::Approx(0.5));
    CHECK(hp(0, 1) == doctest::Approx(-13.0 / 30.0));
    CHECK(hp(1, 1) == doctest::Approx(0.8));

    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(-20.0, 20.0);
    for (int k = 0; k < 200; ++k) {
        CHECK(motivating_H(std::abs(u(rng)), Vec{u(rng), u(rng)})(1, 0) == 0.0);
    }
}

TEST_CASE("revisited_G") {
    const Mat g = revisited_G();
    CHECK(g == (Mat{{2, -3}, {0, 3}}));
    CHECK(g(0, 0) * g(1, 1) - g(0, 1) * g(1, 0) == 6.0);
    CHECK_FALSE(is_singular(g));
}

TEST_CASE("revisited_dg examples") {
    const Mat d0 = revisited_dg(0.0, Vec{0.0, 0.0});
    CHECK(d0(0, 0) == doctest::Approx(0.5));
    CHECK(d0(0, 1) == doctest::Approx(0.2));
    CHECK(d0(1, 0) == 0.0);
    CHECK(d0(1, 1) == doctest::Approx(0.2));

    const Mat dh = revisited_dg(0.0, Vec{pi / 2.0, 0.0});
    CHECK(dh(0, 0) == doctest::Approx(0.0));
    CHECK(dh(0, 1) == doctest::Approx(0.0));
    CHECK(dh(1, 1) == doctest::Approx(0.0));

    // With sin(5t + sigma2) = 1 the off-diagonal picks up the 0.1 term.
    const Mat ds = revisited_dg(0.0, Vec{pi / 2.0, pi / 2.0});
    CHECK(ds(0, 1) == doctest::Approx(0.1));
    CHECK(ds(1, 1) == doctest::Approx(0.1));
}

TEST_CASE("plant lookup") {
    CHECK(plant_by_name("revisited").name == "revisited");
    CHECK(plant_by_name("motivating").m == 2);
    CHECK_THROWS_AS(plant_by_name("pendulum"), Error);

    // The motivating plant realises H through G = I, dg = H - I.
    const PlantSpec mp = motivating_plant();
    const Vec s{0.4, -1.1};
    const Mat h = motivating_H(0.3, s);
    const Mat recon = mp.eval_G(0.3, s) * (Mat::identity(2) + mp.eval_dg(0.3, s));
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) CHECK(recon(i, j) == doctest::Approx(h(i, j)));
}

TEST_CASE("check_assumptions on the revisited plant grid") {
    DisturbanceParams p;
    p.rho = 1.0;
    const auto ts = linspace(0.0, 10.0, 21);
    const auto ss = box_grid(2, -pi, pi, 21);
    const AssumptionReport r = check_assumptions(revisited_plant(), p, ts, ss);
    CHECK(r.grid_size == 21u * 21u * 21u);
    CHECK(r.rank_ok);
    CHECK(r.q_est < 1.0);
    CHECK(r.q_est >= 0.0);
    CHECK(r.q1_est > -1.0);
    CHECK(r.singular_points == 0u);
}

TEST_CASE("check_assumptions with zero uncertainty") {
    PlantSpec plant = revisited_plant();
    plant.eval_dg = [](double, const Vec&) { return Mat(2); };
    DisturbanceParams p;
    const auto ts = linspace(0.0, 1.0, 3);
    const auto ss = box_grid(2, -1.0, 1.0, 3);
    const AssumptionReport r = check_assumptions(plant, p, ts, ss);
    CHECK(r.q_est == 0.0);
    CHECK(r.q1_est == 0.0);
}

TEST_CASE("check_assumptions disturbance bound scales with rho") {
    DisturbanceParams p;
    p.rho = 1000.0;
    const auto ts = linspace(0.0, 10.0, 101);
    const auto ss = box_grid(2, -pi, pi, 11);
    const AssumptionReport r = check_assumptions(motivating_plant(), p, ts, ss);
    CHECK(r.d_est <= 2630.0);
    CHECK(r.d_est > 1000.0);
}

TEST_CASE("check_assumptions reports rank loss") {
    PlantSpec plant = revisited_plant();
    plant.eval_G = [](double t, const Vec&) {
        return t < 0.5 ? Mat{{1, 1}, {1, 1}} : Mat::identity(2);
    };
    DisturbanceParams p;
    const auto ts = linspace(0.0, 1.0, 3);
    const auto ss = box_grid(2, -1.0, 1.0, 2);
    const AssumptionReport r = check_assumptions(plant, p, ts, ss);
    CHECK_FALSE(r.rank_ok);
    CHECK(r.singular_points == 4u);
    CHECK_THROWS_AS(check_assumptions(plant, p, std::span<const double>{}, ss), Error);
}

TEST_CASE("grid helpers") {
    const auto l = linspace(0.0, 1.0, 5);
    REQUIRE(l.size() == 5u);
    CHECK(l.front() == 0.0);
    CHECK(l.back() == 1.0);
    CHECK(l[2] == doctest::Approx(0.5));
    CHECK(linspace(2.0, 3.0, 1) == std::vector<double>{2.0});
    const auto g = box_grid(2, -1.0, 1.0, 3);
    CHECK(g.size() == 9u);
    CHECK(g.front()[0] == -1.0);
    CHECK(g.back()[1] == 1.0);
}
