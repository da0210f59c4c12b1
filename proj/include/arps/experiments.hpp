#pragma once

#include <cstddef>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "arps/controllers.hpp"
#include "arps/integrator.hpp"
#include "arps/plants.hpp"

namespace arps {

/// Everything needed for one closed-loop run.
struct SimulationCase {
    std::string label;
    PlantSpec plant;
    DisturbanceParams disturbance;
    Controller controller;
    StateVector initial;
    SimConfig sim;
};

// ---------------------------------------------------------------------------
// Reaching-time sweeps over (rho, n, b), sigma0 = (b/sqrt2)(10^n, -10^n).

enum class SweepController { Baseline, Arps };

const char* to_string(SweepController c) noexcept;

struct SweepGrid {
    std::vector<double> rho_values;
    std::vector<int> n_values;
    std::vector<double> b_values;

    /// 5 x 4 x 3 points: rho in {0,250,...,1000}, n in {1..4}, b in {1,5,9}.
    static SweepGrid standard();
    /// Standard ranges at finer resolution: rho step 100, every integer n and b.
    static SweepGrid dense();

    std::size_t size() const noexcept {
        return rho_values.size() * n_values.size() * b_values.size();
    }
    /// Nonempty axes; values within rho in [0,1000], n in [1,4], b in [1,9]
    /// unless allow_wide.
    void validate(bool allow_wide) const;
};

enum class SweepStatus { Reached, HorizonExceeded, Fault };

const char* to_string(SweepStatus s) noexcept;

struct SweepEntry {
    double rho = 0.0;
    int n = 0;
    double b = 0.0;
    std::optional<double> t_bar;
    SweepStatus status = SweepStatus::Fault;
    std::string message;
};

struct SweepSettings {
    SweepController controller = SweepController::Arps;
    DisturbanceParams disturbance;  // rho is overwritten per grid point
    ArpsParams arps;
    BaselineParams baseline;
    double epsilon = 0.05;
    SimConfig sim;
    unsigned workers = 0;  // 0: hardware concurrency
    bool allow_wide = false;

    /// Standard parameter sets: ARPS on the revisited plant with T_c = 0.1,
    /// baseline on the motivating plant with K_bar = 100; dt = 1e-6.
    static SweepSettings defaults(SweepController c);
};

struct SweepResult {
    SweepController controller = SweepController::Arps;
    std::optional<double> horizon_T_c;  // set for ARPS sweeps
    std::vector<SweepEntry> entries;    // rho-major, then n, then b

    bool all_reached() const noexcept;
};

/// One simulation per grid point; faults are recorded per point. Entries come
/// back in grid order whatever the worker count.
SweepResult run_sweep(const SweepGrid& grid, const SweepSettings& settings);

// ---------------------------------------------------------------------------
// Scenario studies with the hybrid reaching-phase + barrier controller.

struct SegmentStats {
    double t_start = 0.0;
    double t_end = 0.0;
    double rho = 0.0;
    double mean_lambda = 0.0;
    double max_lambda = 0.0;
    double max_norm_f = 0.0;
    std::size_t samples = 0;
};

struct GainStats {
    double max_lambda = 0.0;
    std::vector<SegmentStats> segments;
};

struct ScenarioReport {
    std::string label;
    SimResult result;
    std::optional<double> t_bar;
    double max_norm_after_switch = 0.0;
    GainStats gain_stats;
    double epsilon = 0.05;
    std::optional<double> T_c;
    std::vector<double> breakpoints;

    bool passed() const noexcept;
};

struct ScenarioOptions {
    double dt = 1e-5;
    std::size_t record_stride = 100;
};

/// Scenario with decreasing disturbance: rho = {80,50,10} switching at
/// t = 0.2, 0.4; ||sigma0|| in {1,5,10}; horizon 1.5 s.
std::vector<SimulationCase> scenario1_cases(const ScenarioOptions& opt);
/// Scenario with increasing disturbance: rho = {10,100,200} switching at
/// t = 3, 6; ||sigma0|| = 1; horizon 9 s.
SimulationCase scenario2_case(const ScenarioOptions& opt);

ScenarioReport run_case(const SimulationCase& c);
std::vector<ScenarioReport> run_scenario1(const ScenarioOptions& opt);
ScenarioReport run_scenario2(const ScenarioOptions& opt);

/// Mean of Lambda over recorded samples with t in [t0, t1]; nullopt if none.
std::optional<double> mean_lambda(const TimeSeries& series, double t0, double t1);

/// Per-schedule-segment maximum of the recorded ||f||, sampled at each record.
std::vector<double> disturbance_envelope(const TimeSeries& series,
                                         std::span<const double> breakpoints);

// ---------------------------------------------------------------------------
// Persistence.

void write_sweep_csv(const SweepResult& sweep, std::ostream& out);
void export_csv(const SweepResult& sweep, const std::string& path);
void export_csv(const TimeSeries& series, const std::string& path);
/// t,norm_f,norm_f_envelope
void export_envelope_csv(const ScenarioReport& report, const std::string& path);

enum class PlotKind { RTSurface, NormTrace, GainTrace, InputTrace };

const char* to_string(PlotKind k) noexcept;
PlotKind plot_kind_from_string(const std::string& s);

/// Reaching time against ||sigma0|| (log axis), one mark per grid point
/// coloured by rho, with the T_c reference line for ARPS sweeps.
std::string render_svg(const SweepResult& sweep);
/// Trace plots over one or more scenario runs, with eps, eps/2 and T_c
/// reference lines.
std::string render_svg(std::span<const ScenarioReport> reports, PlotKind kind);

void export_svg(const SweepResult& sweep, const std::string& path);
void export_svg(std::span<const ScenarioReport> reports, PlotKind kind,
                const std::string& path);

/// Writes `text` to `path`, raising IoError with the path on failure.
void write_text_file(const std::string& path, const std::string& text);

}  // namespace arps
