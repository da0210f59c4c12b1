#include "arps/plants.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "arps/error.hpp"

namespace arps {

double RhoSchedule::at(double t) const noexcept {
    // upper_bound gives left-closed segments: t == breakpoint selects the new value.
    const auto it = std::upper_bound(breakpoints.begin(), breakpoints.end(), t);
    return values[static_cast<std::size_t>(it - breakpoints.begin())];
}

void RhoSchedule::validate() const {
    if (values.size() != breakpoints.size() + 1) {
        throw Error(ErrorCode::InvalidArgument,
                    "rho schedule needs exactly one more value than breakpoints");
    }
    for (std::size_t i = 1; i < breakpoints.size(); ++i) {
        if (!(breakpoints[i] > breakpoints[i - 1])) {
            throw Error(ErrorCode::InvalidArgument,
                        "rho schedule breakpoints must be strictly increasing");
        }
    }
    for (double v : values) {
        if (!(v >= 0.0) || !std::isfinite(v)) {
            throw Error(ErrorCode::InvalidArgument, "rho schedule values must be >= 0");
        }
    }
}

double DisturbanceParams::rho_at(double t) const noexcept {
    return rho_schedule ? rho_schedule->at(t) : rho;
}

void DisturbanceParams::validate() const {
    if (!(rho >= 0.0) || !std::isfinite(rho)) {
        throw Error(ErrorCode::InvalidArgument, "rho must be >= 0");
    }
    if (rho_schedule) rho_schedule->validate();
}

Vec motivating_f(double t, const Vec& sigma, const DisturbanceParams& p) {
    const double rho = p.rho_at(t);
    const double s2 = sigma[1];
    const double osc1 = 0.4 * std::sin(p.omega1 * t) + 0.01 * std::cos(20.0 * t + s2);
    const double osc2 = 0.2 * std::sin(p.omega2 * t) + 0.02 * std::cos(15.0 * t + s2);
    if (p.offset_mode == OffsetMode::InverseRho) {
        // rho * (a1 / rho) == a1, also in the rho -> 0 limit.
        return Vec{p.a1 + rho * osc1, p.b1 + rho * osc2};
    }
    return Vec{rho * (p.a1 + osc1), rho * (p.b1 + osc2)};
}

Mat motivating_H(double t, const Vec& sigma) {
    const double c1 = std::cos(sigma[0]);
    const double s5 = std::sin(5.0 * t + sigma[1]);
    return Mat{{1.0 + 0.5 * c1, 13.0 / 30.0 * c1 - s5 / 30.0},
               {0.0, 1.0 + 0.2 * c1 + 0.1 * s5}};
}

Mat revisited_G() { return Mat{{2.0, -3.0}, {0.0, 3.0}}; }

Mat revisited_dg(double t, const Vec& sigma) {
    const double c1 = std::cos(sigma[0]);
    const double shared = 0.2 * c1 + 0.1 * std::sin(5.0 * t + sigma[1]);
    return Mat{{0.5 * c1, shared}, {0.0, shared}};
}

PlantSpec motivating_plant() {
    PlantSpec p;
    p.name = "motivating";
    p.m = 2;
    p.eval_G = [](double, const Vec&) { return Mat::identity(2); };
    p.eval_dg = [](double t, const Vec& s) {
        Mat d = motivating_H(t, s);
        d(0, 0) -= 1.0;
        d(1, 1) -= 1.0;
        return d;
    };
    p.eval_f = motivating_f;
    return p;
}

PlantSpec revisited_plant() {
    PlantSpec p;
    p.name = "revisited";
    p.m = 2;
    p.eval_G = [](double, const Vec&) { return revisited_G(); };
    p.eval_dg = revisited_dg;
    p.eval_f = motivating_f;
    return p;
}

PlantSpec plant_by_name(const std::string& name) {
    if (name == "motivating") return motivating_plant();
    if (name == "revisited") return revisited_plant();
    throw Error(ErrorCode::ConfigError, "unknown plant '" + name + "'");
}

AssumptionReport check_assumptions(const PlantSpec& plant, const DisturbanceParams& p,
                                   std::span<const double> t_grid,
                                   std::span<const Vec> sigma_grid) {
    if (t_grid.empty() || sigma_grid.empty()) {
        throw Error(ErrorCode::InvalidArgument, "assumption grids must be nonempty");
    }
    AssumptionReport report;
    report.q_est = 0.0;
    report.q1_est = std::numeric_limits<double>::infinity();
    for (double t : t_grid) {
        for (const Vec& sigma : sigma_grid) {
            ++report.grid_size;
            report.d_est = std::max(report.d_est, norm2(plant.eval_f(t, sigma, p)));
            const Mat g = plant.eval_G(t, sigma);
            if (is_singular(g)) {
                report.rank_ok = false;
                ++report.singular_points;
                continue;
            }
            const Mat dG = g * plant.eval_dg(t, sigma) * invert(g);
            report.q_est = std::max(report.q_est, mat_inf_norm(dG));
            report.q1_est = std::min(report.q1_est, min_eig_sym_part(dG));
        }
    }
    if (!std::isfinite(report.q1_est)) report.q1_est = 0.0;
    return report;
}

std::vector<double> linspace(double lo, double hi, std::size_t n) {
    std::vector<double> out(n);
    if (n == 1) {
        out[0] = lo;
        return out;
    }
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    }
    return out;
}

std::vector<Vec> box_grid(std::size_t m, double lo, double hi, std::size_t n) {
    const auto axis = linspace(lo, hi, n);
    std::size_t total = 1;
    for (std::size_t i = 0; i < m; ++i) total *= n;
    std::vector<Vec> out;
    out.reserve(total);
    for (std::size_t idx = 0; idx < total; ++idx) {
        Vec v(m);
        std::size_t rem = idx;
        for (std::size_t k = 0; k < m; ++k) {
            v[k] = axis[rem % n];
            rem /= n;
        }
        out.push_back(v);
    }
    return out;
}

}  // namespace arps
