#include "arps/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <thread>

#include "arps/error.hpp"
#include "arps/numfmt.hpp"
#include "svg_plot.hpp"

namespace arps {

const char* to_string(SweepController c) noexcept {
    return c == SweepController::Baseline ? "baseline" : "arps";
}

const char* to_string(SweepStatus s) noexcept {
    switch (s) {
        case SweepStatus::Reached: return "Reached";
        case SweepStatus::HorizonExceeded: return "HorizonExceeded";
        case SweepStatus::Fault: return "Fault";
    }
    return "Unknown";
}

SweepGrid SweepGrid::standard() {
    return SweepGrid{{0.0, 250.0, 500.0, 750.0, 1000.0}, {1, 2, 3, 4}, {1.0, 5.0, 9.0}};
}

SweepGrid SweepGrid::dense() {
    SweepGrid g;
    for (int i = 0; i <= 10; ++i) g.rho_values.push_back(100.0 * i);
    g.n_values = {1, 2, 3, 4};
    for (int b = 1; b <= 9; ++b) g.b_values.push_back(b);
    return g;
}

void SweepGrid::validate(bool allow_wide) const {
    if (rho_values.empty() || n_values.empty() || b_values.empty()) {
        throw Error(ErrorCode::ConfigError, "sweep grid has an empty axis");
    }
    for (double r : rho_values) {
        if (!std::isfinite(r) || r < 0.0) {
            throw Error(ErrorCode::ConfigError, "rho must be >= 0, got " + format_g17(r));
        }
        if (!allow_wide && r > 1000.0) {
            throw Error(ErrorCode::ConfigError,
                        "rho " + format_g17(r) + " outside [0,1000] (allow wide ranges to run it)");
        }
    }
    for (int n : n_values) {
        if (!allow_wide && (n < 1 || n > 4)) {
            throw Error(ErrorCode::ConfigError,
                        "n " + std::to_string(n) + " outside [1,4] (allow wide ranges to run it)");
        }
    }
    for (double b : b_values) {
        if (!std::isfinite(b) || b <= 0.0) {
            throw Error(ErrorCode::ConfigError, "b must be > 0, got " + format_g17(b));
        }
        if (!allow_wide && (b < 1.0 || b > 9.0)) {
            throw Error(ErrorCode::ConfigError,
                        "b " + format_g17(b) + " outside [1,9] (allow wide ranges to run it)");
        }
    }
}

SweepSettings SweepSettings::defaults(SweepController c) {
    SweepSettings s;
    s.controller = c;
    s.sim.dt = 1e-6;
    s.sim.stop_at_reach = true;
    s.sim.record_stride = std::numeric_limits<std::size_t>::max() / 2;
    // The T_c - dt guard ends ARPS runs; the baseline needs a few seconds at
    // the largest initial conditions.
    s.sim.t_end = c == SweepController::Arps ? s.arps.T_c : 5.0;
    return s;
}

bool SweepResult::all_reached() const noexcept {
    return std::all_of(entries.begin(), entries.end(),
                       [](const SweepEntry& e) { return e.status == SweepStatus::Reached; });
}

namespace {

SweepEntry run_point(double rho, int n, double b, const SweepSettings& s) {
    SweepEntry e{rho, n, b, std::nullopt, SweepStatus::Fault, {}};
    try {
        DisturbanceParams d = s.disturbance;
        d.rho = rho;
        const bool arps = s.controller == SweepController::Arps;
        const PlantSpec plant = arps ? revisited_plant() : motivating_plant();
        const Controller c = arps ? Controller{ArpsController{s.arps, s.epsilon}}
                                  : Controller{BaselineController{s.baseline, s.epsilon}};
        const SimResult r = simulate(plant, d, c, StateVector{symmetric_initial(n, b), 0.0}, s.sim);
        if (r.reach) e.t_bar = r.reach->t_bar;
        e.message = r.message;
        switch (r.status) {
            case Termination::StoppedAtReach:
            case Termination::Completed:
                e.status = r.reach ? SweepStatus::Reached : SweepStatus::HorizonExceeded;
                if (!r.reach) e.message = "no crossing of eps/2 before t_end";
                break;
            case Termination::TimeHorizonExceeded: e.status = SweepStatus::HorizonExceeded; break;
            default: e.status = SweepStatus::Fault;
        }
    } catch (const std::exception& ex) {
        e.status = SweepStatus::Fault;
        e.message = ex.what();
    }
    return e;
}

}  // namespace

SweepResult run_sweep(const SweepGrid& grid, const SweepSettings& settings) {
    grid.validate(settings.allow_wide);
    settings.sim.validate();
    if (settings.controller == SweepController::Arps) {
        settings.arps.validate();
    } else {
        settings.baseline.validate();
    }
    settings.disturbance.validate();

    struct Point {
        double rho;
        int n;
        double b;
    };
    std::vector<Point> points;
    points.reserve(grid.size());
    for (double rho : grid.rho_values)
        for (int n : grid.n_values)
            for (double b : grid.b_values) points.push_back({rho, n, b});

    SweepResult out;
    out.controller = settings.controller;
    if (settings.controller == SweepController::Arps) out.horizon_T_c = settings.arps.T_c;
    out.entries.resize(points.size());

    unsigned workers = settings.workers ? settings.workers : std::thread::hardware_concurrency();
    workers = std::clamp<unsigned>(workers, 1, static_cast<unsigned>(points.size()));

    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next++; i < points.size(); i = next++) {
            out.entries[i] = run_point(points[i].rho, points[i].n, points[i].b, settings);
        }
    };
    if (workers == 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    }
    return out;
}

// ---------------------------------------------------------------------------

namespace {

SimulationCase hybrid_case(std::string label, const DisturbanceParams& d, const Vec& sigma0,
                           double t_end, const ScenarioOptions& opt) {
    SimulationCase c;
    c.label = std::move(label);
    c.plant = revisited_plant();
    c.disturbance = d;
    c.controller = HybridController{ArpsParams{0.4, 1.0, 0.0},
                                    BarrierSpec{BarrierKind::PositiveSemiDefinite, 0.05, 0.0}};
    c.initial = StateVector{sigma0, 0.0};
    c.sim.dt = opt.dt;
    c.sim.t_end = t_end;
    c.sim.record_stride = opt.record_stride;
    return c;
}

Vec diagonal_initial(double norm) {
    const double a = norm / std::sqrt(2.0);
    return Vec{a, -a};
}

}  // namespace

std::vector<SimulationCase> scenario1_cases(const ScenarioOptions& opt) {
    DisturbanceParams d;
    d.a1 = 1.0;
    d.b1 = 1.2;
    d.omega1 = 30.0;
    d.omega2 = 20.0;
    d.offset_mode = OffsetMode::InverseRho;
    d.rho_schedule = RhoSchedule{{0.2, 0.4}, {80.0, 50.0, 10.0}};
    std::vector<SimulationCase> cases;
    for (double norm : {1.0, 5.0, 10.0}) {
        cases.push_back(hybrid_case("scenario1_norm" + std::to_string(static_cast<int>(norm)), d,
                                    diagonal_initial(norm), 1.5, opt));
    }
    return cases;
}

SimulationCase scenario2_case(const ScenarioOptions& opt) {
    DisturbanceParams d;
    d.a1 = 1.0;
    d.b1 = 1.0;
    d.omega1 = 2.0;
    d.omega2 = 3.0;
    d.offset_mode = OffsetMode::InverseRho;
    d.rho_schedule = RhoSchedule{{3.0, 6.0}, {10.0, 100.0, 200.0}};
    return hybrid_case("scenario2", d, diagonal_initial(1.0), 9.0, opt);
}

namespace {

std::vector<double> breakpoints_of(const DisturbanceParams& d) {
    return d.rho_schedule ? d.rho_schedule->breakpoints : std::vector<double>{};
}

std::size_t segment_of(double t, std::span<const double> breakpoints) {
    return static_cast<std::size_t>(std::upper_bound(breakpoints.begin(), breakpoints.end(), t) -
                                    breakpoints.begin());
}

GainStats gain_stats(const TimeSeries& series, const DisturbanceParams& d, double t_end) {
    const std::vector<double> bp = breakpoints_of(d);
    GainStats g;
    g.segments.resize(bp.size() + 1);
    for (std::size_t i = 0; i < g.segments.size(); ++i) {
        SegmentStats& s = g.segments[i];
        s.t_start = i == 0 ? 0.0 : bp[i - 1];
        s.t_end = i < bp.size() ? bp[i] : t_end;
        s.rho = d.rho_at(s.t_start);
    }
    for (const Sample& x : series.samples) {
        SegmentStats& s = g.segments[segment_of(x.t, bp)];
        s.mean_lambda += x.lambda;
        s.max_lambda = std::max(s.max_lambda, x.lambda);
        s.max_norm_f = std::max(s.max_norm_f, x.norm_f);
        ++s.samples;
        g.max_lambda = std::max(g.max_lambda, x.lambda);
    }
    for (SegmentStats& s : g.segments) {
        if (s.samples) s.mean_lambda /= static_cast<double>(s.samples);
    }
    return g;
}

}  // namespace

bool ScenarioReport::passed() const noexcept {
    if (is_fault(result.status) || !t_bar) return false;
    if (T_c && !(*t_bar < *T_c)) return false;
    return max_norm_after_switch < epsilon && std::isfinite(gain_stats.max_lambda);
}

ScenarioReport run_case(const SimulationCase& c) {
    ScenarioReport rep;
    rep.label = c.label;
    rep.result = simulate(c.plant, c.disturbance, c.controller, c.initial, c.sim);
    if (rep.result.reach) rep.t_bar = rep.result.reach->t_bar;
    if (const auto* h = std::get_if<HybridController>(&c.controller)) {
        rep.epsilon = h->barrier.epsilon;
        rep.T_c = h->arps.T_c;
    } else if (const auto* a = std::get_if<ArpsController>(&c.controller)) {
        rep.epsilon = a->epsilon;
        rep.T_c = a->params.T_c;
    } else {
        rep.epsilon = std::get<BaselineController>(c.controller).epsilon;
    }
    if (rep.t_bar) {
        for (const Sample& s : rep.result.series.samples) {
            if (s.t >= *rep.t_bar) rep.max_norm_after_switch = std::max(rep.max_norm_after_switch, s.norm_sigma);
        }
    }
    rep.gain_stats = gain_stats(rep.result.series, c.disturbance, c.sim.t_end);
    rep.breakpoints = breakpoints_of(c.disturbance);
    return rep;
}

std::vector<ScenarioReport> run_scenario1(const ScenarioOptions& opt) {
    std::vector<ScenarioReport> out;
    for (const SimulationCase& c : scenario1_cases(opt)) out.push_back(run_case(c));
    return out;
}

ScenarioReport run_scenario2(const ScenarioOptions& opt) { return run_case(scenario2_case(opt)); }

std::optional<double> mean_lambda(const TimeSeries& series, double t0, double t1) {
    double sum = 0.0;
    std::size_t n = 0;
    for (const Sample& s : series.samples) {
        if (s.t >= t0 && s.t <= t1) {
            sum += s.lambda;
            ++n;
        }
    }
    if (n == 0) return std::nullopt;
    return sum / static_cast<double>(n);
}

std::vector<double> disturbance_envelope(const TimeSeries& series,
                                         std::span<const double> breakpoints) {
    std::vector<double> seg_max(breakpoints.size() + 1, 0.0);
    for (const Sample& s : series.samples) {
        double& m = seg_max[segment_of(s.t, breakpoints)];
        m = std::max(m, s.norm_f);
    }
    std::vector<double> out;
    out.reserve(series.samples.size());
    for (const Sample& s : series.samples) out.push_back(seg_max[segment_of(s.t, breakpoints)]);
    return out;
}

// ---------------------------------------------------------------------------

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw Error(ErrorCode::IoError, "cannot open " + path + " for writing");
    f << text;
    f.flush();
    if (!f) throw Error(ErrorCode::IoError, "write failed for " + path);
}

void write_sweep_csv(const SweepResult& sweep, std::ostream& out) {
    out << "rho,n,b,t_bar,status\n";
    for (const SweepEntry& e : sweep.entries) {
        out << format_g17(e.rho) << ',' << e.n << ',' << format_g17(e.b) << ','
            << (e.t_bar ? format_g17(*e.t_bar) : std::string()) << ',' << to_string(e.status)
            << '\n';
    }
}

void export_csv(const SweepResult& sweep, const std::string& path) {
    std::ostringstream s;
    write_sweep_csv(sweep, s);
    write_text_file(path, s.str());
}

void export_csv(const TimeSeries& series, const std::string& path) {
    std::ostringstream s;
    write_csv(series, s);
    write_text_file(path, s.str());
}

void export_envelope_csv(const ScenarioReport& report, const std::string& path) {
    const TimeSeries& ts = report.result.series;
    const std::vector<double> env = disturbance_envelope(ts, report.breakpoints);
    std::ostringstream s;
    s << "t,norm_f,norm_f_envelope\n";
    for (std::size_t i = 0; i < ts.samples.size(); ++i) {
        s << format_g17(ts.samples[i].t) << ',' << format_g17(ts.samples[i].norm_f) << ','
          << format_g17(env[i]) << '\n';
    }
    write_text_file(path, s.str());
}

const char* to_string(PlotKind k) noexcept {
    switch (k) {
        case PlotKind::RTSurface: return "rt-surface";
        case PlotKind::NormTrace: return "norm";
        case PlotKind::GainTrace: return "gain";
        case PlotKind::InputTrace: return "input";
    }
    return "unknown";
}

PlotKind plot_kind_from_string(const std::string& s) {
    for (PlotKind k : {PlotKind::RTSurface, PlotKind::NormTrace, PlotKind::GainTrace,
                       PlotKind::InputTrace}) {
        if (s == to_string(k)) return k;
    }
    throw Error(ErrorCode::InvalidArgument, "unknown plot kind '" + s + "'");
}

std::string render_svg(const SweepResult& sweep) {
    if (sweep.entries.empty()) throw Error(ErrorCode::InvalidArgument, "cannot plot an empty sweep");
    svg::Plot plot(std::string("Reaching time, ") + to_string(sweep.controller) + " controller",
                   "||sigma0|| = b 10^n", "t_bar [s]");

    double lo = std::numeric_limits<double>::infinity(), hi = 0.0, t_hi = 0.0;
    for (const SweepEntry& e : sweep.entries) {
        const double x = e.b * std::pow(10.0, e.n);
        lo = std::min(lo, x);
        hi = std::max(hi, x);
        if (e.t_bar) t_hi = std::max(t_hi, *e.t_bar);
    }
    if (hi <= lo) {
        lo /= 10.0;
        hi *= 10.0;
    }
    plot.set_x_range(lo / 2.0, hi * 2.0, true);
    if (sweep.horizon_T_c) t_hi = std::max(t_hi, *sweep.horizon_T_c);
    plot.set_y_range(0.0, t_hi > 0.0 ? 1.1 * t_hi : 1.0);

    std::vector<double> rhos;
    for (const SweepEntry& e : sweep.entries) {
        if (std::find(rhos.begin(), rhos.end(), e.rho) == rhos.end()) rhos.push_back(e.rho);
    }
    const auto& colors = svg::palette();
    for (std::size_t i = 0; i < rhos.size(); ++i) {
        // Zero-length line entries carry the legend for each rho colour.
        plot.add_line({}, {}, colors[i % colors.size()], false, "legend-key",
                      "rho = " + format_g17(rhos[i]));
    }
    for (const SweepEntry& e : sweep.entries) {
        if (!e.t_bar) continue;
        const std::size_t ci = static_cast<std::size_t>(
            std::find(rhos.begin(), rhos.end(), e.rho) - rhos.begin());
        plot.add_mark(e.b * std::pow(10.0, e.n), *e.t_bar, colors[ci % colors.size()]);
    }
    if (sweep.horizon_T_c) plot.add_hline(*sweep.horizon_T_c, "T_c", "ref-Tc");
    return plot.render();
}

std::string render_svg(std::span<const ScenarioReport> reports, PlotKind kind) {
    if (reports.empty()) throw Error(ErrorCode::InvalidArgument, "no runs to plot");
    if (kind == PlotKind::RTSurface) {
        throw Error(ErrorCode::InvalidArgument, "rt-surface needs a sweep result");
    }
    const char* title = kind == PlotKind::NormTrace   ? "Norm of the sliding variable"
                        : kind == PlotKind::GainTrace ? "Adaptive gain and disturbance norm"
                                                      : "Norm of the control input";
    const char* ylabel = kind == PlotKind::NormTrace   ? "||sigma||"
                         : kind == PlotKind::GainTrace ? "Lambda, ||f||"
                                                       : "||nu||";
    svg::Plot plot(title, "t [s]", ylabel);

    double t_max = 0.0;
    for (const ScenarioReport& r : reports) {
        if (!r.result.series.samples.empty()) {
            t_max = std::max(t_max, r.result.series.samples.back().t);
        }
    }
    if (t_max > 0.0) plot.set_x_range(0.0, t_max);

    if (kind == PlotKind::NormTrace) {
        double y_hi = reports.front().epsilon;
        double y_lo = reports.front().epsilon / 2.0;
        for (const ScenarioReport& r : reports) {
            for (const Sample& s : r.result.series.samples) {
                y_hi = std::max(y_hi, s.norm_sigma);
                if (s.norm_sigma > 0.0) y_lo = std::min(y_lo, s.norm_sigma);
            }
        }
        plot.set_y_range(std::pow(10.0, std::floor(std::log10(y_lo))),
                         std::pow(10.0, std::ceil(std::log10(y_hi))), true);
    }

    const auto& colors = svg::palette();
    for (std::size_t i = 0; i < reports.size(); ++i) {
        const ScenarioReport& r = reports[i];
        const auto& samples = r.result.series.samples;
        std::vector<double> ts, ys, fs;
        ts.reserve(samples.size());
        for (const Sample& s : samples) {
            ts.push_back(s.t);
            ys.push_back(kind == PlotKind::NormTrace   ? s.norm_sigma
                         : kind == PlotKind::GainTrace ? s.lambda
                                                       : s.norm_nu);
            fs.push_back(s.norm_f);
        }
        const std::string& color = colors[i % colors.size()];
        std::string legend = r.label;
        if (r.t_bar) legend += ", t_bar = " + format_g17(*r.t_bar);
        plot.add_line(ts, ys, color, false, "trace", legend);
        if (kind == PlotKind::GainTrace) {
            plot.add_line(ts, fs, color, true, "trace-f", "");
            const std::vector<double> env = disturbance_envelope(r.result.series, r.breakpoints);
            plot.add_line(ts, env, "#7f7f7f", true, "trace-envelope", "");
        }
    }
    if (kind == PlotKind::NormTrace) {
        plot.add_hline(reports.front().epsilon, "eps", "ref-eps");
        plot.add_hline(reports.front().epsilon / 2.0, "eps/2", "ref-eps-half");
    }
    if (reports.front().T_c && (t_max == 0.0 || *reports.front().T_c <= t_max)) {
        plot.add_vline(*reports.front().T_c, "T_c", "ref-Tc");
    }
    return plot.render();
}

void export_svg(const SweepResult& sweep, const std::string& path) {
    write_text_file(path, render_svg(sweep));
}

void export_svg(std::span<const ScenarioReport> reports, PlotKind kind, const std::string& path) {
    write_text_file(path, render_svg(reports, kind));
}

}  // namespace arps
