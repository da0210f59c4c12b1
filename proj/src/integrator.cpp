#include "arps/integrator.hpp"

#include <cmath>
#include <variant>

#include "arps/error.hpp"
#include "arps/numfmt.hpp"

namespace arps {

void SimConfig::validate() const {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw Error(ErrorCode::InvalidArgument, "dt must be > 0");
    if (!(t_end > 0.0) || !std::isfinite(t_end)) {
        throw Error(ErrorCode::InvalidArgument, "t_end must be > 0");
    }
    if (record_stride < 1) throw Error(ErrorCode::InvalidArgument, "record_stride must be >= 1");
    if (!(deadzone >= 0.0)) throw Error(ErrorCode::InvalidArgument, "deadzone must be >= 0");
}

std::size_t SimConfig::steps() const noexcept {
    // The small slack absorbs t_end / dt landing a hair below an integer.
    return static_cast<std::size_t>(std::floor(t_end / dt + 1e-9));
}

std::size_t SimConfig::expected_samples() const noexcept { return steps() / record_stride + 1; }

const char* to_string(Termination t) noexcept {
    switch (t) {
        case Termination::Completed: return "Completed";
        case Termination::StoppedAtReach: return "StoppedAtReach";
        case Termination::TimeHorizonExceeded: return "TimeHorizonExceeded";
        case Termination::BarrierBreached: return "BarrierBreached";
        case Termination::NonFiniteState: return "NonFiniteState";
        case Termination::SingularMatrix: return "SingularMatrix";
    }
    return "Unknown";
}

bool is_fault(Termination t) noexcept {
    return t != Termination::Completed && t != Termination::StoppedAtReach;
}

Evaluation evaluate(const StateVector& state, const GainState& gains, const PlantSpec& plant,
                    const DisturbanceParams& disturbance, const Controller& controller,
                    double deadzone) {
    const double t = state.t;
    const double r = norm2(state.sigma);

    Evaluation ev;
    ev.gains = gains;
    if (const auto* b = std::get_if<BaselineController>(&controller)) {
        (void)b;
        ev.lambda = gains.k_hat;
    } else if (const auto* a = std::get_if<ArpsController>(&controller)) {
        ev.lambda = arps_gain(t, r, gains.beta_hat, a->params);
    } else {
        const auto& h = std::get<HybridController>(controller);
        const HybridGain hg = hybrid_gain(t, r, gains, h.arps, h.barrier);
        ev.lambda = hg.lambda;
        ev.gains = hg.state;
    }

    const std::size_t m = state.sigma.size();
    const Mat G = plant.eval_G(t, state.sigma);
    if (r < deadzone) {
        // Filippov selection at the origin.
        ev.nu = Vec(m);
        ev.u = Vec(m);
    } else {
        ControlOutput c = unit_vector_control(state.sigma, ev.lambda, G, deadzone);
        ev.nu = c.nu;
        ev.u = c.u;
    }
    const Mat dg = plant.eval_dg(t, state.sigma);
    ev.f = plant.eval_f(t, state.sigma, disturbance);
    ev.sigma_dot = G * (ev.u + dg * ev.u) + ev.f;
    return ev;
}

namespace {

GainState advance_gains(const Evaluation& ev, double r, const Controller& controller, double dt) {
    GainState g = ev.gains;
    if (const auto* b = std::get_if<BaselineController>(&controller)) {
        g.k_hat += dt * baseline_gain_rate(r, b->params);
    } else if (std::holds_alternative<ArpsController>(controller)) {
        g.beta_hat += dt * arps_gain_rate(r);
    } else if (g.mode == Mode::ReachingPhase) {
        g.beta_hat += dt * arps_gain_rate(r);
    }
    return g;
}

void require_finite(const StateVector& s, const GainState& g) {
    if (!is_finite(s.sigma) || !std::isfinite(g.beta_hat) || !std::isfinite(g.k_hat)) {
        throw Error(ErrorCode::NonFiniteState,
                    "state became non-finite at t = " + format_g17(s.t));
    }
}

Termination termination_for(ErrorCode code) {
    switch (code) {
        case ErrorCode::TimeHorizonExceeded: return Termination::TimeHorizonExceeded;
        case ErrorCode::BarrierBreached: return Termination::BarrierBreached;
        case ErrorCode::NonFiniteState: return Termination::NonFiniteState;
        case ErrorCode::SingularMatrix: return Termination::SingularMatrix;
        default: return Termination::Completed;
    }
}

const ArpsParams* reaching_params(const Controller& c) {
    if (const auto* a = std::get_if<ArpsController>(&c)) return &a->params;
    if (const auto* h = std::get_if<HybridController>(&c)) return &h->arps;
    return nullptr;
}

}  // namespace

StepOutcome step(const StateVector& state, const GainState& gains, const PlantSpec& plant,
                 const DisturbanceParams& disturbance, const Controller& controller,
                 const SimConfig& cfg) {
    const Evaluation ev = evaluate(state, gains, plant, disturbance, controller, cfg.deadzone);
    StepOutcome out;
    out.state.sigma = state.sigma + cfg.dt * ev.sigma_dot;
    out.state.t = state.t + cfg.dt;
    out.gains = advance_gains(ev, norm2(state.sigma), controller, cfg.dt);
    require_finite(out.state, out.gains);
    return out;
}

SimResult simulate(const PlantSpec& plant, const DisturbanceParams& disturbance,
                   const Controller& controller, const StateVector& initial,
                   const SimConfig& cfg) {
    cfg.validate();
    validate(controller);
    disturbance.validate();
    if (initial.sigma.size() != plant.m) {
        throw Error(ErrorCode::InvalidArgument, "initial state dimension does not match plant");
    }
    if (!is_finite(initial.sigma)) {
        throw Error(ErrorCode::InvalidArgument, "initial state must be finite");
    }

    SimResult res;
    res.series.m = plant.m;
    res.series.samples.reserve(cfg.stop_at_reach ? 2 : cfg.expected_samples());

    const std::size_t n_steps = cfg.steps();
    const double threshold = reach_threshold(controller);
    const ArpsParams* rp = reaching_params(controller);

    StateVector state = initial;
    GainState gains = initial_gains(controller);

    for (std::size_t k = 0;; ++k) {
        state.t = static_cast<double>(k) * cfg.dt;
        const double r = norm2(state.sigma);
        if (!res.reach && r <= threshold) res.reach = ReachEvent{state.t, r, k};

        try {
            if (rp && !res.reach && state.t >= rp->T_c - cfg.dt * (1.0 + 1e-9)) {
                throw Error(ErrorCode::TimeHorizonExceeded,
                            "reaching phase did not end before T_c - dt (t = " +
                                format_g17(state.t) + ")");
            }
            const Evaluation ev =
                evaluate(state, gains, plant, disturbance, controller, cfg.deadzone);

            const bool stop_now = cfg.stop_at_reach && res.reach.has_value();
            if (k % cfg.record_stride == 0 || stop_now || k == n_steps) {
                res.series.samples.push_back(Sample{state.t, state.sigma, r, ev.lambda,
                                                    norm2(ev.nu), norm2(ev.f), ev.gains.mode});
            }
            if (stop_now) {
                res.status = Termination::StoppedAtReach;
                gains = ev.gains;
                break;
            }
            if (k == n_steps) {
                gains = ev.gains;
                break;
            }

            state.sigma += cfg.dt * ev.sigma_dot;
            gains = advance_gains(ev, r, controller, cfg.dt);
            require_finite(state, gains);
        } catch (const Error& e) {
            const Termination t = termination_for(e.code());
            if (t == Termination::Completed) throw;
            res.status = t;
            res.message = e.what();
            break;
        }
    }
    res.final_state = state;
    res.final_gains = gains;
    return res;
}

std::optional<double> reach_time(const TimeSeries& series, double threshold) {
    for (const Sample& s : series.samples) {
        if (s.norm_sigma <= threshold) return s.t;
    }
    return std::nullopt;
}

Vec symmetric_initial(double n, double b) {
    const double mag = b / std::sqrt(2.0) * std::pow(10.0, n);
    return Vec{mag, -mag};
}

std::string csv_header(std::size_t m) {
    std::string h = "t";
    for (std::size_t i = 1; i <= m; ++i) h += ",sigma_" + std::to_string(i);
    h += ",norm_sigma,Lambda,norm_nu,norm_f,mode";
    return h;
}

void write_csv(const TimeSeries& series, std::ostream& out) {
    out << csv_header(series.m) << '\n';
    for (const Sample& s : series.samples) {
        out << format_g17(s.t);
        for (double x : s.sigma) out << ',' << format_g17(x);
        out << ',' << format_g17(s.norm_sigma) << ',' << format_g17(s.lambda) << ','
            << format_g17(s.norm_nu) << ',' << format_g17(s.norm_f) << ',' << to_string(s.mode)
            << '\n';
    }
}

}  // namespace arps
