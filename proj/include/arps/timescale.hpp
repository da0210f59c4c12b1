#pragma once

#include <cstddef>
#include <ostream>
#include <vector>

#include "arps/controllers.hpp"
#include "arps/core.hpp"
#include "arps/integrator.hpp"
#include "arps/plants.hpp"

namespace arps {

/// Time-scale map t = T_c (1 - exp(-alpha tau)), sending [0, inf) onto [0, T_c).
struct ScaleMap {
    double alpha = 0.4;
    double T_c = 0.1;

    void validate() const;
    /// dt/dtau = alpha T_c exp(-alpha tau), the reciprocal of kappa(t(tau)).
    double kappa_bar_inv(double tau) const noexcept;
};

double t_of_tau(double tau, const ScaleMap& map);
/// Throws DomainError unless 0 <= t < T_c.
double tau_of_t(double t, const ScaleMap& map);

struct ScaledSample {
    double tau = 0.0;
    double t = 0.0;
    Vec y;
    double norm_y = 0.0;
    double beta_tilde = 0.0;
    double lambda = 0.0;  // equivalent unscaled gain beta + kappa ||y||
    double norm_nu = 0.0;
    double norm_f_bar = 0.0;
};

struct ScaledSeries {
    std::size_t m = 0;
    std::vector<ScaledSample> samples;
};

/// tau_of_t(0.999 T_c)
double default_tau_max(const ScaleMap& map);

/// Euler integration in tau of
///   y' = (I + dG)(-kbar^-1 beta y/||y|| - y) + kbar^-1 f(t(tau), y),
///   beta' = kbar^-1 ||y||,
/// with dG = G dg G^-1 at (t(tau), y). cfg.dt is the tau step and cfg.t_end
/// the tau horizon. Throws NonFiniteState on overflow.
ScaledSeries simulate_scaled(const PlantSpec& plant, const DisturbanceParams& disturbance,
                             const ArpsParams& arps, const Vec& y0, const SimConfig& cfg);

/// Sup over scaled samples of ||sigma(t(tau)) - y(tau)||, with sigma linearly
/// interpolated from the direct series. Samples outside the direct series'
/// time range are skipped.
double equivalence_deviation(const TimeSeries& direct, const ScaledSeries& scaled);

struct LyapunovSample {
    double tau = 0.0;
    double V = 0.0;
    double V1 = 0.0;
    double V2 = 0.0;
};

struct LyapunovTrace {
    std::vector<LyapunovSample> samples;
    double max_V = 0.0;
    double max_forward_diff = 0.0;  // max_k V_{k+1} - V_k
    double max_forward_rate = 0.0;  // same divided by the tau spacing
};

/// V = ||y||^2 + b0 (beta_tilde - beta_star)^2 along the scaled run.
LyapunovTrace lyapunov_trace(const ScaledSeries& scaled, double beta_star, double b0);

struct OracleSettings {
    PlantSpec plant;
    DisturbanceParams disturbance;
    ArpsParams arps;
    Vec sigma0;
    SimConfig direct;  // t_end below T_c
    SimConfig scaled;  // dt is the tau step, t_end the tau horizon
    double beta_star = 0.0;
    double b0 = 1.0;
    double tolerance = 1e-3;
    double lyapunov_rel_tol = 1e-6;
};

struct OracleReport {
    double deviation = 0.0;
    double deviation_half_step = 0.0;
    double max_V = 0.0;
    double max_forward_diff = 0.0;
    std::size_t scaled_samples = 0;
    bool equivalence_ok = false;  // deviation <= tolerance
    bool halving_ok = false;      // halving both steps shrinks the deviation
    bool lyapunov_ok = false;     // max forward diff <= rel_tol * max V
    ScaledSeries scaled;
};

/// Direct and scaled runs at the configured steps, then again with both
/// steps halved, plus the Lyapunov trace along the first scaled run.
OracleReport run_oracle(const OracleSettings& s);

/// CSV with the integrator schema and a leading tau column.
void write_scaled_csv(const ScaledSeries& series, std::ostream& out);

}  // namespace arps
