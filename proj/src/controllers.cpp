#include "arps/controllers.hpp"

#include <cmath>
#include <string>

#include "arps/error.hpp"
#include "arps/numfmt.hpp"

namespace arps {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::string num(double x) { return format_g17(x); }

}  // namespace

void ArpsParams::validate() const {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "alpha must lie in (0,1), got " + num(alpha));
    }
    if (!(T_c > 0.0) || !std::isfinite(T_c)) {
        throw Error(ErrorCode::InvalidArgument, "T_c must be > 0, got " + num(T_c));
    }
    if (!(beta0 >= 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "beta0 must be >= 0, got " + num(beta0));
    }
}

const char* to_string(BarrierKind kind) noexcept {
    return kind == BarrierKind::PositiveDefinite ? "pd" : "psd";
}

void BarrierSpec::validate() const {
    if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
        throw Error(ErrorCode::InvalidArgument, "epsilon must be > 0, got " + num(epsilon));
    }
    if (!(beta_bar >= 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "beta_bar must be >= 0, got " + num(beta_bar));
    }
    if (kind == BarrierKind::PositiveSemiDefinite && beta_bar != 0.0) {
        throw Error(ErrorCode::InvalidArgument, "the psd barrier has beta_bar = 0");
    }
}

void BaselineParams::validate() const {
    if (!(K_bar > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "K_bar must be > 0, got " + num(K_bar));
    }
    if (!(k0 >= 0.0)) throw Error(ErrorCode::InvalidArgument, "k0 must be >= 0");
}

ControlOutput unit_vector_control(const Vec& sigma, double lambda, const Mat& G,
                                  double deadzone) {
    const double n = norm2(sigma);
    if (n < deadzone) {
        throw Error(ErrorCode::DeadzoneHit, "||sigma|| below deadzone " + num(deadzone));
    }
    ControlOutput out;
    out.nu = (-lambda / n) * sigma;
    out.u = invert(G) * out.nu;
    return out;
}

double arps_gain(double t, double norm_sigma, double beta_hat, const ArpsParams& p) {
    if (t >= p.T_c) {
        throw Error(ErrorCode::TimeHorizonExceeded,
                    "reaching-phase gain evaluated at t = " + num(t) + " >= T_c = " + num(p.T_c));
    }
    return beta_hat + norm_sigma / (p.alpha * (p.T_c - t));
}

double arps_gain_rate(double norm_sigma) noexcept { return norm_sigma; }

double baseline_gain_rate(double norm_sigma, const BaselineParams& p) noexcept {
    return p.K_bar * norm_sigma;
}

double barrier_gain(double norm_sigma, const BarrierSpec& spec) {
    const double eps = spec.epsilon;
    if (norm_sigma >= eps) {
        throw Error(ErrorCode::BarrierBreached,
                    "||sigma|| = " + num(norm_sigma) + " reached the barrier width " + num(eps));
    }
    if (spec.kind == BarrierKind::PositiveDefinite) {
        return spec.beta_bar * eps / (eps - norm_sigma);
    }
    return norm_sigma / (eps - norm_sigma);
}

double barrier_root_s(const BarrierSpec& spec, double beta_star) {
    if (!(beta_star > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "beta_star must be > 0");
    }
    const double eps = spec.epsilon;
    if (spec.kind == BarrierKind::PositiveDefinite) {
        return spec.beta_bar < beta_star ? eps * (1.0 - spec.beta_bar / beta_star) : 0.0;
    }
    return eps * beta_star / (1.0 + beta_star);
}

HybridGain hybrid_gain(double t, double norm_sigma, const GainState& state,
                       const ArpsParams& arps, const BarrierSpec& barrier) {
    HybridGain out{0.0, state};
    if (state.mode == Mode::ReachingPhase && norm_sigma <= 0.5 * barrier.epsilon) {
        out.state.mode = Mode::AdaptivePhase;
        out.state.t_bar = t;
    }
    if (out.state.mode == Mode::AdaptivePhase) {
        out.lambda = barrier_gain(norm_sigma, barrier);
    } else {
        out.lambda = arps_gain(t, norm_sigma, state.beta_hat, arps);
    }
    return out;
}

GainState initial_gains(const Controller& c) {
    GainState g;
    std::visit(overloaded{
                   [&](const BaselineController& b) { g.k_hat = b.params.k0; },
                   [&](const ArpsController& a) { g.beta_hat = a.params.beta0; },
                   [&](const HybridController& h) { g.beta_hat = h.arps.beta0; },
               },
               c);
    return g;
}

double reach_threshold(const Controller& c) noexcept {
    return std::visit(overloaded{
                          [](const BaselineController& b) { return 0.5 * b.epsilon; },
                          [](const ArpsController& a) { return 0.5 * a.epsilon; },
                          [](const HybridController& h) { return 0.5 * h.barrier.epsilon; },
                      },
                      c);
}

void validate(const Controller& c) {
    auto check_eps = [](double eps) {
        if (!(eps > 0.0)) throw Error(ErrorCode::InvalidArgument, "epsilon must be > 0");
    };
    std::visit(overloaded{
                   [&](const BaselineController& b) {
                       b.params.validate();
                       check_eps(b.epsilon);
                   },
                   [&](const ArpsController& a) {
                       a.params.validate();
                       check_eps(a.epsilon);
                   },
                   [&](const HybridController& h) {
                       h.arps.validate();
                       h.barrier.validate();
                   },
               },
               c);
}

const char* controller_name(const Controller& c) noexcept {
    return std::visit(overloaded{
                          [](const BaselineController&) { return "baseline"; },
                          [](const ArpsController&) { return "arps"; },
                          [](const HybridController&) { return "hybrid"; },
                      },
                      c);
}

}  // namespace arps
