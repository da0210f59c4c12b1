#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "arps/core.hpp"

namespace arps {

/// Piecewise-constant rho(t) on left-closed intervals [t_i, t_{i+1}).
/// breakpoints[i] is where values[i + 1] takes over; values.size() ==
/// breakpoints.size() + 1.
struct RhoSchedule {
    std::vector<double> breakpoints;
    std::vector<double> values;

    double at(double t) const noexcept;
    void validate() const;
};

/// How a1/b1 enter the disturbance. InverseRho means the configured a1/b1
/// are divided by the current rho, so rho * a1 stays fixed across schedule
/// segments.
enum class OffsetMode { Absolute, InverseRho };

struct DisturbanceParams {
    double rho = 0.0;
    double a1 = 1.0;
    double b1 = 1.2;
    double omega1 = 3.0;
    double omega2 = 2.0;
    OffsetMode offset_mode = OffsetMode::Absolute;
    std::optional<RhoSchedule> rho_schedule;

    /// Effective rho at time t (schedule wins over the constant).
    double rho_at(double t) const noexcept;
    void validate() const;
};

/// Uncertain system  sigma' = G (I + dg) u + f.
struct PlantSpec {
    std::string name;
    std::size_t m = 0;
    std::function<Mat(double t, const Vec& sigma)> eval_G;
    std::function<Mat(double t, const Vec& sigma)> eval_dg;
    std::function<Vec(double t, const Vec& sigma, const DisturbanceParams& p)> eval_f;
};

Vec motivating_f(double t, const Vec& sigma, const DisturbanceParams& p);
Mat motivating_H(double t, const Vec& sigma);
Mat revisited_G();
Mat revisited_dg(double t, const Vec& sigma);

/// sigma' = H nu + f, written as G = I and dg = H - I so both plants share
/// the generic closed loop.
PlantSpec motivating_plant();
/// G constant, dg printed, disturbance shared with the motivating plant.
PlantSpec revisited_plant();
PlantSpec plant_by_name(const std::string& name);

struct AssumptionReport {
    bool rank_ok = true;
    double q_est = 0.0;
    double q1_est = 0.0;
    double d_est = 0.0;
    std::size_t grid_size = 0;
    std::size_t singular_points = 0;
};

/// Worst-case rank, ||G dg G^-1||_inf, lambda_min of the symmetric part and
/// ||f|| over the Cartesian product t_grid x sigma_grid. Points where G is
/// singular clear rank_ok and are excluded from q/q1.
AssumptionReport check_assumptions(const PlantSpec& plant, const DisturbanceParams& p,
                                   std::span<const double> t_grid,
                                   std::span<const Vec> sigma_grid);

/// n evenly spaced points on [lo, hi], both ends included.
std::vector<double> linspace(double lo, double hi, std::size_t n);

/// Cartesian grid over [lo, hi]^m with n points per axis.
std::vector<Vec> box_grid(std::size_t m, double lo, double hi, std::size_t n);

}  // namespace arps
