#pragma once

#include <variant>

#include "arps/core.hpp"

namespace arps {

/// Reaching-phase gain parameters: Lambda = beta_hat + ||sigma|| / (alpha (T_c - t)).
struct ArpsParams {
    double alpha = 0.4;
    double T_c = 0.1;
    double beta0 = 0.0;

    void validate() const;
};

enum class BarrierKind { PositiveDefinite, PositiveSemiDefinite };

const char* to_string(BarrierKind kind) noexcept;

struct BarrierSpec {
    BarrierKind kind = BarrierKind::PositiveSemiDefinite;
    double epsilon = 0.05;
    double beta_bar = 0.0;  // must stay 0 for the semi-definite kind

    void validate() const;
};

/// Classical adaptive law k_hat' = K_bar ||sigma||.
struct BaselineParams {
    double K_bar = 100.0;
    double k0 = 0.0;

    void validate() const;
};

struct ControlOutput {
    Vec u;
    Vec nu;
};

inline constexpr double kDefaultDeadzone = 1e-12;

/// nu = -Lambda sigma / ||sigma||, u = G^-1 nu. Throws DeadzoneHit when
/// ||sigma|| < deadzone; the caller then applies nu = 0.
ControlOutput unit_vector_control(const Vec& sigma, double lambda, const Mat& G,
                                  double deadzone = kDefaultDeadzone);

/// Throws TimeHorizonExceeded for t >= T_c.
double arps_gain(double t, double norm_sigma, double beta_hat, const ArpsParams& p);
double arps_gain_rate(double norm_sigma) noexcept;
double baseline_gain_rate(double norm_sigma, const BaselineParams& p) noexcept;

/// K_pd = beta_bar eps / (eps - ||sigma||), K_psd = ||sigma|| / (eps - ||sigma||).
/// Throws BarrierBreached for ||sigma|| >= eps.
double barrier_gain(double norm_sigma, const BarrierSpec& spec);

/// Root s < eps of K_BF(s) = beta_star. Analysis only: beta_star is unknown
/// to the controller.
double barrier_root_s(const BarrierSpec& spec, double beta_star);

struct HybridGain {
    double lambda = 0.0;
    GainState state;
};

/// Reaching-phase gain until the first instant ||sigma|| <= eps/2, then the
/// barrier gain for good. The switch records t_bar and happens once.
HybridGain hybrid_gain(double t, double norm_sigma, const GainState& state,
                       const ArpsParams& arps, const BarrierSpec& barrier);

struct BaselineController {
    BaselineParams params;
    double epsilon = 0.05;  // only sets the eps/2 reach threshold
};

struct ArpsController {
    ArpsParams params;
    double epsilon = 0.05;
};

struct HybridController {
    ArpsParams arps;
    BarrierSpec barrier;
};

using Controller = std::variant<BaselineController, ArpsController, HybridController>;

GainState initial_gains(const Controller& c);
double reach_threshold(const Controller& c) noexcept;
void validate(const Controller& c);
const char* controller_name(const Controller& c) noexcept;

}  // namespace arps
