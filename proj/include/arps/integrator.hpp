#pragma once

#include <cstddef>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "arps/controllers.hpp"
#include "arps/core.hpp"
#include "arps/plants.hpp"

namespace arps {

struct SimConfig {
    double dt = 1e-6;
    double t_end = 1.0;
    std::size_t record_stride = 100;
    double deadzone = kDefaultDeadzone;
    // Sweeps only need the reaching time; stop as soon as it is known.
    bool stop_at_reach = false;

    void validate() const;
    /// Number of Euler steps covering [0, t_end].
    std::size_t steps() const noexcept;
    /// floor(t_end / dt / stride) + 1
    std::size_t expected_samples() const noexcept;
};

struct Sample {
    double t = 0.0;
    Vec sigma;
    double norm_sigma = 0.0;
    double lambda = 0.0;
    double norm_nu = 0.0;
    double norm_f = 0.0;
    Mode mode = Mode::ReachingPhase;
};

struct TimeSeries {
    std::size_t m = 0;
    std::vector<Sample> samples;
};

struct ReachEvent {
    double t_bar = 0.0;
    double norm_at_event = 0.0;
    std::size_t steps_taken = 0;
};

enum class Termination {
    Completed,
    StoppedAtReach,
    TimeHorizonExceeded,
    BarrierBreached,
    NonFiniteState,
    SingularMatrix,
};

const char* to_string(Termination t) noexcept;
bool is_fault(Termination t) noexcept;

/// Closed-loop right-hand side evaluated at one instant. `gains` already
/// reflects a reaching-phase switch occurring at this instant.
struct Evaluation {
    double lambda = 0.0;
    Vec nu;
    Vec u;
    Vec f;
    Vec sigma_dot;
    GainState gains;
};

Evaluation evaluate(const StateVector& state, const GainState& gains, const PlantSpec& plant,
                    const DisturbanceParams& disturbance, const Controller& controller,
                    double deadzone);

struct StepOutcome {
    StateVector state;
    GainState gains;
};

/// One explicit Euler step of sigma and the active adaptive integrator.
/// Throws NonFiniteState when the new state overflows.
StepOutcome step(const StateVector& state, const GainState& gains, const PlantSpec& plant,
                 const DisturbanceParams& disturbance, const Controller& controller,
                 const SimConfig& cfg);

struct SimResult {
    TimeSeries series;
    std::optional<ReachEvent> reach;
    Termination status = Termination::Completed;
    std::string message;
    StateVector final_state;
    GainState final_gains;
};

/// Fixed-step run from `initial` over [0, t_end]. Faults end the run early
/// and are reported through `status`; the samples recorded so far are kept.
SimResult simulate(const PlantSpec& plant, const DisturbanceParams& disturbance,
                   const Controller& controller, const StateVector& initial,
                   const SimConfig& cfg);

/// First recorded time with norm_sigma <= threshold.
std::optional<double> reach_time(const TimeSeries& series, double threshold);

/// sigma0 = (b / sqrt 2) (10^n, -10^n).
Vec symmetric_initial(double n, double b);

/// CSV: t,sigma_1..sigma_m,norm_sigma,Lambda,norm_nu,norm_f,mode
void write_csv(const TimeSeries& series, std::ostream& out);
std::string csv_header(std::size_t m);

}  // namespace arps
