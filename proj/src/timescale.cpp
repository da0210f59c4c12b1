#include "arps/timescale.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "arps/error.hpp"
#include "arps/numfmt.hpp"

namespace arps {

void ScaleMap::validate() const {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "alpha must lie in (0,1)");
    }
    if (!(T_c > 0.0)) throw Error(ErrorCode::InvalidArgument, "T_c must be > 0");
}

double ScaleMap::kappa_bar_inv(double tau) const noexcept {
    return alpha * T_c * std::exp(-alpha * tau);
}

double t_of_tau(double tau, const ScaleMap& map) {
    if (!(tau >= 0.0)) throw Error(ErrorCode::DomainError, "tau must be >= 0");
    return -map.T_c * std::expm1(-map.alpha * tau);
}

double tau_of_t(double t, const ScaleMap& map) {
    if (!(t >= 0.0) || !(t < map.T_c)) {
        throw Error(ErrorCode::DomainError,
                    "tau_of_t needs 0 <= t < T_c, got t = " + format_g17(t));
    }
    return -std::log1p(-t / map.T_c) / map.alpha;
}

double default_tau_max(const ScaleMap& map) { return tau_of_t(0.999 * map.T_c, map); }

ScaledSeries simulate_scaled(const PlantSpec& plant, const DisturbanceParams& disturbance,
                             const ArpsParams& arps, const Vec& y0, const SimConfig& cfg) {
    cfg.validate();
    arps.validate();
    disturbance.validate();
    if (y0.size() != plant.m) {
        throw Error(ErrorCode::InvalidArgument, "y0 dimension does not match plant");
    }
    if (!(norm2(y0) > 0.0)) throw Error(ErrorCode::InvalidArgument, "y0 must be nonzero");

    const ScaleMap map{arps.alpha, arps.T_c};
    const std::size_t m = plant.m;
    const std::size_t n_steps = cfg.steps();

    ScaledSeries out;
    out.m = m;
    out.samples.reserve(cfg.expected_samples());

    Vec y = y0;
    double beta = arps.beta0;
    const Mat id = Mat::identity(m);

    for (std::size_t k = 0;; ++k) {
        const double tau = static_cast<double>(k) * cfg.dt;
        const double kinv = map.kappa_bar_inv(tau);
        const double t = t_of_tau(tau, map);
        const double ny = norm2(y);

        const Mat G = plant.eval_G(t, y);
        const Mat dG = G * plant.eval_dg(t, y) * invert(G);

        Vec nu = -1.0 * y;
        if (ny >= cfg.deadzone && ny > 0.0) nu += (-kinv * beta / ny) * y;
        const Vec f_bar = kinv * plant.eval_f(t, y, disturbance);

        if (k % cfg.record_stride == 0 || k == n_steps) {
            out.samples.push_back(ScaledSample{tau, t, y, ny, beta, beta + ny / kinv,
                                               norm2(nu), norm2(f_bar)});
        }
        if (k == n_steps) break;

        const Vec y_dot = (id + dG) * nu + f_bar;
        y += cfg.dt * y_dot;
        beta += cfg.dt * kinv * ny;
        if (!is_finite(y) || !std::isfinite(beta)) {
            throw Error(ErrorCode::NonFiniteState,
                        "scaled state became non-finite at tau = " + format_g17(tau));
        }
    }
    return out;
}

double equivalence_deviation(const TimeSeries& direct, const ScaledSeries& scaled) {
    const auto& d = direct.samples;
    if (d.size() < 2) throw Error(ErrorCode::InvalidArgument, "direct series too short");
    double worst = 0.0;
    std::size_t j = 0;
    for (const ScaledSample& s : scaled.samples) {
        if (s.t < d.front().t || s.t > d.back().t) continue;
        while (j + 2 < d.size() && d[j + 1].t < s.t) ++j;
        const double span = d[j + 1].t - d[j].t;
        const double w = span > 0.0 ? (s.t - d[j].t) / span : 0.0;
        Vec sigma = d[j].sigma + w * (d[j + 1].sigma - d[j].sigma);
        worst = std::max(worst, norm2(sigma - s.y));
    }
    return worst;
}

LyapunovTrace lyapunov_trace(const ScaledSeries& scaled, double beta_star, double b0) {
    LyapunovTrace tr;
    tr.samples.reserve(scaled.samples.size());
    for (const ScaledSample& s : scaled.samples) {
        const double v1 = s.norm_y * s.norm_y;
        const double e = s.beta_tilde - beta_star;
        const double v2 = b0 * e * e;
        tr.samples.push_back(LyapunovSample{s.tau, v1 + v2, v1, v2});
        tr.max_V = std::max(tr.max_V, v1 + v2);
    }
    tr.max_forward_diff = -std::numeric_limits<double>::infinity();
    tr.max_forward_rate = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 1; k < tr.samples.size(); ++k) {
        const double dv = tr.samples[k].V - tr.samples[k - 1].V;
        const double dtau = tr.samples[k].tau - tr.samples[k - 1].tau;
        tr.max_forward_diff = std::max(tr.max_forward_diff, dv);
        if (dtau > 0.0) tr.max_forward_rate = std::max(tr.max_forward_rate, dv / dtau);
    }
    if (tr.samples.size() < 2) {
        tr.max_forward_diff = 0.0;
        tr.max_forward_rate = 0.0;
    }
    return tr;
}

OracleReport run_oracle(const OracleSettings& s) {
    const Controller c = ArpsController{s.arps, 0.05};
    auto deviation = [&](double scale, ScaledSeries* keep) {
        SimConfig direct = s.direct;
        direct.dt *= scale;
        direct.record_stride = std::max<std::size_t>(1, direct.record_stride);
        SimConfig scaled = s.scaled;
        scaled.dt *= scale;
        scaled.record_stride = static_cast<std::size_t>(
            std::max(1.0, std::round(static_cast<double>(scaled.record_stride) / scale)));
        const SimResult d = simulate(s.plant, s.disturbance, c, StateVector{s.sigma0, 0.0}, direct);
        if (is_fault(d.status)) throw Error(ErrorCode::InvalidArgument, "direct run failed: " + d.message);
        ScaledSeries y = simulate_scaled(s.plant, s.disturbance, s.arps, s.sigma0, scaled);
        const double dev = equivalence_deviation(d.series, y);
        if (keep) *keep = std::move(y);
        return dev;
    };

    OracleReport r;
    r.deviation = deviation(1.0, &r.scaled);
    r.deviation_half_step = deviation(0.5, nullptr);
    r.scaled_samples = r.scaled.samples.size();
    const LyapunovTrace tr = lyapunov_trace(r.scaled, s.beta_star, s.b0);
    r.max_V = tr.max_V;
    r.max_forward_diff = tr.max_forward_diff;
    r.equivalence_ok = r.deviation <= s.tolerance;
    r.halving_ok = r.deviation_half_step < r.deviation;
    r.lyapunov_ok = r.max_forward_diff <= s.lyapunov_rel_tol * r.max_V;
    return r;
}

void write_scaled_csv(const ScaledSeries& series, std::ostream& out) {
    out << "tau," << csv_header(series.m) << '\n';
    for (const ScaledSample& s : series.samples) {
        out << format_g17(s.tau) << ',' << format_g17(s.t);
        for (double x : s.y) out << ',' << format_g17(x);
        out << ',' << format_g17(s.norm_y) << ',' << format_g17(s.lambda) << ','
            << format_g17(s.norm_nu) << ',' << format_g17(s.norm_f_bar) << ",RP\n";
    }
}

}  // namespace arps
