#include "arps/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "arps/error.hpp"
#include "arps/numfmt.hpp"

namespace arps {

namespace {

constexpr ConfigKey kKeys[] = {
    {"scenario", KeyKind::Choice, "0", "0|1|2", "study preset (0 = none)"},
    {"plant.kind", KeyKind::Choice, "revisited", "revisited|motivating", "plant model"},
    {"disturbance.rho", KeyKind::Real, "100", nullptr, "disturbance amplitude rho >= 0"},
    {"disturbance.a1", KeyKind::Real, "1", nullptr, "offset of the first channel"},
    {"disturbance.b1", KeyKind::Real, "1.2", nullptr, "offset of the second channel"},
    {"disturbance.omega1", KeyKind::Real, "3", nullptr, "frequency of the first channel"},
    {"disturbance.omega2", KeyKind::Real, "2", nullptr, "frequency of the second channel"},
    {"disturbance.offset_mode", KeyKind::Choice, "absolute", "absolute|inverse-rho",
     "inverse-rho divides a1, b1 by the current rho"},
    {"disturbance.schedule_values", KeyKind::RealList, "", nullptr,
     "piecewise-constant rho values (empty = constant rho)"},
    {"disturbance.schedule_breakpoints", KeyKind::RealList, "", nullptr,
     "switch times between schedule values"},
    {"controller.kind", KeyKind::Choice, "arps", "arps|baseline|hybrid", "control law"},
    {"controller.alpha", KeyKind::Real, "0.4", nullptr, "reaching-phase alpha in (0,1)"},
    {"controller.T_c", KeyKind::Real, "0.1", nullptr, "predefined reaching time bound"},
    {"controller.beta0", KeyKind::Real, "0", nullptr, "initial adaptive term"},
    {"controller.epsilon", KeyKind::Real, "0.05", nullptr, "barrier width; reach at eps/2"},
    {"controller.barrier", KeyKind::Choice, "psd", "psd|pd", "barrier function kind"},
    {"controller.beta_bar", KeyKind::Real, "0", nullptr, "pd barrier offset"},
    {"controller.K_bar", KeyKind::Real, "100", nullptr, "baseline adaptation rate"},
    {"controller.k0", KeyKind::Real, "0", nullptr, "baseline initial gain"},
    {"sim.dt", KeyKind::Real, "1e-6", nullptr, "Euler step"},
    {"sim.t_end", KeyKind::RealOrAuto, "auto", nullptr,
     "horizon; auto = 0.999 T_c (arps), 2 T_c (hybrid), 5 (baseline)"},
    {"sim.stride", KeyKind::Integer, "100", nullptr, "record every k-th step"},
    {"sim.deadzone", KeyKind::Real, "1e-12", nullptr, "||sigma|| below which nu = 0"},
    {"sim.stop_at_reach", KeyKind::Boolean, "false", nullptr, "end the run at the eps/2 crossing"},
    {"sim.sigma0", KeyKind::RealList, "", nullptr, "explicit initial sigma (overrides n, b)"},
    {"sim.sigma0_n", KeyKind::Real, "1", nullptr, "sigma0 = (b/sqrt2)(10^n, -10^n)"},
    {"sim.sigma0_b", KeyKind::Real, "1", nullptr, "sigma0 = (b/sqrt2)(10^n, -10^n)"},
    {"sim.sigma0_norms", KeyKind::RealList, "", nullptr,
     "one run per norm along (1,-1)/sqrt2 (overrides the above)"},
    {"sweep.rho", KeyKind::RealList, "0,250,500,750,1000", nullptr, "sweep rho axis"},
    {"sweep.n", KeyKind::RealList, "1,2,3,4", nullptr, "sweep exponent axis (integers)"},
    {"sweep.b", KeyKind::RealList, "1,5,9", nullptr, "sweep scale axis"},
    {"sweep.allow_wide", KeyKind::Boolean, "false", nullptr, "permit axes outside the standard ranges"},
    {"sweep.workers", KeyKind::Integer, "0", nullptr, "worker threads (0 = all cores)"},
    {"sweep.t_end", KeyKind::RealOrAuto, "auto", nullptr, "per-point horizon; auto = T_c (arps), 5 (baseline)"},
    {"verify.t_min", KeyKind::Real, "0", nullptr, "assumption grid time range"},
    {"verify.t_max", KeyKind::Real, "10", nullptr, "assumption grid time range"},
    {"verify.t_points", KeyKind::Integer, "21", nullptr, "assumption grid time samples"},
    {"verify.sigma_min", KeyKind::Real, "-3.141592653589793", nullptr, "assumption grid sigma box"},
    {"verify.sigma_max", KeyKind::Real, "3.141592653589793", nullptr, "assumption grid sigma box"},
    {"verify.sigma_points", KeyKind::Integer, "21", nullptr, "assumption grid samples per axis"},
    {"oracle.dtau", KeyKind::Real, "1e-5", nullptr, "scaled-time step"},
    {"oracle.stride", KeyKind::Integer, "10", nullptr, "scaled samples compared every k-th step"},
    {"oracle.tolerance", KeyKind::Real, "1e-3", nullptr, "sup-norm equivalence tolerance"},
};

const ConfigKey* find_key(const std::string& name) {
    for (const ConfigKey& k : kKeys) {
        if (name == k.name) return &k;
    }
    return nullptr;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::optional<double> parse_real(const std::string& s) {
    double v = 0.0;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    if (first != last && *first == '+') ++first;
    const auto [p, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || p != last || !std::isfinite(v)) return std::nullopt;
    return v;
}

std::optional<long> parse_integer(const std::string& s) {
    long v = 0;
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size()) return std::nullopt;
    return v;
}

std::optional<bool> parse_bool(const std::string& s) {
    if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
    if (s == "false" || s == "0" || s == "no" || s == "off") return false;
    return std::nullopt;
}

std::optional<std::vector<double>> parse_list(const std::string& s) {
    std::vector<double> out;
    if (trim(s).empty()) return out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto v = parse_real(trim(item));
        if (!v) return std::nullopt;
        out.push_back(*v);
    }
    return out;
}

bool has_choice(const char* choices, const std::string& v) {
    std::stringstream ss(choices);
    std::string item;
    while (std::getline(ss, item, '|')) {
        if (item == v) return true;
    }
    return false;
}

[[noreturn]] void bad_value(const ConfigKey& k, const std::string& v, const char* what) {
    std::string msg = std::string("invalid value '") + v + "' for " + k.name + ": expected " + what;
    if (k.kind == KeyKind::Choice) msg += std::string(" (") + k.choices + ")";
    throw Error(ErrorCode::ConfigError, msg);
}

}  // namespace

std::span<const ConfigKey> config_keys() { return kKeys; }

Config::Config() {
    for (const ConfigKey& k : kKeys) values_[k.name] = k.default_value;
}

void Config::set(const std::string& key, const std::string& raw) {
    const ConfigKey* k = find_key(key);
    if (!k) throw Error(ErrorCode::ConfigError, "unknown config key '" + key + "'");
    const std::string v = trim(raw);
    switch (k->kind) {
        case KeyKind::Real:
            if (!parse_real(v)) bad_value(*k, v, "a real number");
            break;
        case KeyKind::Integer:
            if (!parse_integer(v)) bad_value(*k, v, "an integer");
            break;
        case KeyKind::Boolean:
            if (!parse_bool(v)) bad_value(*k, v, "true or false");
            break;
        case KeyKind::Choice:
            if (!has_choice(k->choices, v)) bad_value(*k, v, "one of");
            break;
        case KeyKind::RealList:
            if (!parse_list(v)) bad_value(*k, v, "a comma-separated list of reals");
            break;
        case KeyKind::RealOrAuto:
            if (v != "auto" && !parse_real(v)) bad_value(*k, v, "a real number or auto");
            break;
    }
    values_[key] = v;
}

const std::string& Config::get(const std::string& key) const {
    const auto it = values_.find(key);
    if (it == values_.end()) throw Error(ErrorCode::ConfigError, "unknown config key '" + key + "'");
    return it->second;
}

void Config::apply_scenario(int scenario) {
    if (scenario < 0 || scenario > 2) {
        throw Error(ErrorCode::ConfigError, "scenario must be 0, 1 or 2");
    }
    set("scenario", std::to_string(scenario));
    if (scenario == 0) return;
    set("plant.kind", "revisited");
    set("controller.kind", "hybrid");
    set("controller.alpha", "0.4");
    set("controller.T_c", "1");
    set("controller.beta0", "0");
    set("controller.epsilon", "0.05");
    set("controller.barrier", "psd");
    set("controller.beta_bar", "0");
    set("disturbance.offset_mode", "inverse-rho");
    set("sim.dt", "1e-5");
    set("sim.stride", "100");
    set("sim.stop_at_reach", "false");
    if (scenario == 1) {
        set("disturbance.a1", "1");
        set("disturbance.b1", "1.2");
        set("disturbance.omega1", "30");
        set("disturbance.omega2", "20");
        set("disturbance.schedule_values", "80,50,10");
        set("disturbance.schedule_breakpoints", "0.2,0.4");
        set("sim.t_end", "1.5");
        set("sim.sigma0_norms", "1,5,10");
    } else {
        set("disturbance.a1", "1");
        set("disturbance.b1", "1");
        set("disturbance.omega1", "2");
        set("disturbance.omega2", "3");
        set("disturbance.schedule_values", "10,100,200");
        set("disturbance.schedule_breakpoints", "3,6");
        set("sim.t_end", "9");
        set("sim.sigma0_norms", "1");
    }
}

void Config::apply_dense() {
    set("sweep.rho", "0,100,200,300,400,500,600,700,800,900,1000");
    set("sweep.n", "1,2,3,4");
    set("sweep.b", "1,2,3,4,5,6,7,8,9");
}

void Config::load_file(const std::string& path, std::optional<int> scenario_override) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw Error(ErrorCode::ConfigError, "cannot read config file " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    load_text(ss.str(), path, scenario_override);
}

void Config::load_text(const std::string& text, const std::string& origin,
                       std::optional<int> scenario_override) {
    std::vector<std::pair<std::string, std::string>> pairs;
    std::stringstream ss(text);
    std::string line;
    for (int lineno = 1; std::getline(ss, line); ++lineno) {
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw Error(ErrorCode::ConfigError,
                        origin + ":" + std::to_string(lineno) + ": expected key = value");
        }
        pairs.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }

    std::optional<int> scenario = scenario_override;
    if (!scenario) {
        for (const auto& [k, v] : pairs) {
            if (k == "scenario") {
                const auto n = parse_integer(v);
                if (!n || *n < 0 || *n > 2) {
                    throw Error(ErrorCode::ConfigError, origin + ": scenario must be 0, 1 or 2");
                }
                scenario = static_cast<int>(*n);
            }
        }
    }
    if (scenario) apply_scenario(*scenario);
    for (const auto& [k, v] : pairs) {
        if (k == "scenario") continue;
        try {
            set(k, v);
        } catch (const Error& e) {
            throw Error(ErrorCode::ConfigError, origin + ": " + e.what());
        }
    }
}

std::vector<std::pair<std::string, std::string>> Config::entries() const {
    std::vector<std::pair<std::string, std::string>> out;
    for (const ConfigKey& k : kKeys) out.emplace_back(k.name, values_.at(k.name));
    return out;
}

std::string Config::to_text() const {
    std::string s;
    for (const auto& [k, v] : entries()) s += k + " = " + v + "\n";
    return s;
}

double Config::real(const std::string& key) const {
    const auto v = parse_real(get(key));
    if (!v) throw Error(ErrorCode::ConfigError, key + " is not a real number");
    return *v;
}

long Config::integer(const std::string& key) const {
    const auto v = parse_integer(get(key));
    if (!v) throw Error(ErrorCode::ConfigError, key + " is not an integer");
    return *v;
}

bool Config::boolean(const std::string& key) const {
    const auto v = parse_bool(get(key));
    if (!v) throw Error(ErrorCode::ConfigError, key + " is not a boolean");
    return *v;
}

std::vector<double> Config::reals(const std::string& key) const {
    const auto v = parse_list(get(key));
    if (!v) throw Error(ErrorCode::ConfigError, key + " is not a list of reals");
    return *v;
}

std::optional<double> Config::real_or_auto(const std::string& key) const {
    if (get(key) == "auto") return std::nullopt;
    return real(key);
}

// ---------------------------------------------------------------------------

namespace {

// Domain errors found while resolving a config are configuration errors.
template <class F>
auto as_config_error(F&& f) {
    try {
        return f();
    } catch (const Error& e) {
        if (e.code() == ErrorCode::ConfigError) throw;
        throw Error(ErrorCode::ConfigError, e.what());
    }
}

double require_nonneg(const Config& cfg, const std::string& key) {
    const double v = cfg.real(key);
    if (v < 0.0) throw Error(ErrorCode::ConfigError, key + " must be >= 0, got " + format_g17(v));
    return v;
}

}  // namespace

PlantSpec resolve_plant(const Config& cfg) { return plant_by_name(cfg.get("plant.kind")); }

DisturbanceParams resolve_disturbance(const Config& cfg) {
    return as_config_error([&] {
        DisturbanceParams d;
        d.rho = require_nonneg(cfg, "disturbance.rho");
        d.a1 = cfg.real("disturbance.a1");
        d.b1 = cfg.real("disturbance.b1");
        d.omega1 = cfg.real("disturbance.omega1");
        d.omega2 = cfg.real("disturbance.omega2");
        d.offset_mode = cfg.get("disturbance.offset_mode") == "inverse-rho" ? OffsetMode::InverseRho
                                                                           : OffsetMode::Absolute;
        auto values = cfg.reals("disturbance.schedule_values");
        auto breaks = cfg.reals("disturbance.schedule_breakpoints");
        if (!values.empty() || !breaks.empty()) {
            d.rho_schedule = RhoSchedule{std::move(breaks), std::move(values)};
        }
        d.validate();
        return d;
    });
}

Controller resolve_controller(const Config& cfg) {
    return as_config_error([&]() -> Controller {
        const std::string kind = cfg.get("controller.kind");
        const ArpsParams arps{cfg.real("controller.alpha"), cfg.real("controller.T_c"),
                              cfg.real("controller.beta0")};
        const double eps = cfg.real("controller.epsilon");
        Controller c;
        if (kind == "baseline") {
            c = BaselineController{BaselineParams{cfg.real("controller.K_bar"), cfg.real("controller.k0")},
                                   eps};
        } else if (kind == "arps") {
            c = ArpsController{arps, eps};
        } else {
            const BarrierKind bk = cfg.get("controller.barrier") == "pd"
                                       ? BarrierKind::PositiveDefinite
                                       : BarrierKind::PositiveSemiDefinite;
            c = HybridController{arps, BarrierSpec{bk, eps, cfg.real("controller.beta_bar")}};
        }
        validate(c);
        return c;
    });
}

std::vector<SimulationCase> resolve_cases(const Config& cfg) {
    const PlantSpec plant = resolve_plant(cfg);
    const DisturbanceParams d = resolve_disturbance(cfg);
    const Controller controller = resolve_controller(cfg);

    SimConfig sim;
    sim.dt = cfg.real("sim.dt");
    const long stride = cfg.integer("sim.stride");
    if (stride < 1) throw Error(ErrorCode::ConfigError, "sim.stride must be >= 1");
    sim.record_stride = static_cast<std::size_t>(stride);
    sim.deadzone = cfg.real("sim.deadzone");
    sim.stop_at_reach = cfg.boolean("sim.stop_at_reach");
    if (const auto t = cfg.real_or_auto("sim.t_end")) {
        sim.t_end = *t;
    } else if (const auto* a = std::get_if<ArpsController>(&controller)) {
        sim.t_end = 0.999 * a->params.T_c;
    } else if (const auto* h = std::get_if<HybridController>(&controller)) {
        sim.t_end = 2.0 * h->arps.T_c;
    } else {
        sim.t_end = 5.0;
    }
    as_config_error([&] {
        sim.validate();
        return 0;
    });

    const long scenario = cfg.integer("scenario");
    const std::string prefix = scenario ? "scenario" + std::to_string(scenario) : "run";

    std::vector<std::pair<std::string, Vec>> starts;
    const auto norms = cfg.reals("sim.sigma0_norms");
    if (!norms.empty()) {
        if (plant.m != 2) throw Error(ErrorCode::ConfigError, "sim.sigma0_norms needs a 2-D plant");
        for (double n : norms) {
            if (!(n > 0.0)) throw Error(ErrorCode::ConfigError, "sim.sigma0_norms entries must be > 0");
            const double a = n / std::numbers::sqrt2;
            std::string tag = format_g17(n);
            std::replace(tag.begin(), tag.end(), '.', 'p');
            starts.emplace_back(prefix + "_norm" + tag, Vec{a, -a});
        }
    } else if (const auto s = cfg.reals("sim.sigma0"); !s.empty()) {
        if (s.size() != plant.m) {
            throw Error(ErrorCode::ConfigError, "sim.sigma0 has " + std::to_string(s.size()) +
                                                    " entries, plant needs " + std::to_string(plant.m));
        }
        Vec v(plant.m);
        std::copy(s.begin(), s.end(), v.begin());
        starts.emplace_back(prefix, v);
    } else {
        starts.emplace_back(prefix, symmetric_initial(cfg.real("sim.sigma0_n"), cfg.real("sim.sigma0_b")));
    }

    std::vector<SimulationCase> cases;
    for (auto& [label, sigma0] : starts) {
        cases.push_back(SimulationCase{label, plant, d, controller, StateVector{sigma0, 0.0}, sim});
    }
    return cases;
}

SweepGrid resolve_grid(const Config& cfg) {
    SweepGrid g;
    g.rho_values = cfg.reals("sweep.rho");
    for (double n : cfg.reals("sweep.n")) {
        if (n != std::floor(n)) {
            throw Error(ErrorCode::ConfigError, "sweep.n entries must be integers, got " + format_g17(n));
        }
        g.n_values.push_back(static_cast<int>(n));
    }
    g.b_values = cfg.reals("sweep.b");
    as_config_error([&] {
        g.validate(cfg.boolean("sweep.allow_wide"));
        return 0;
    });
    return g;
}

SweepSettings resolve_sweep(const Config& cfg) {
    const std::string kind = cfg.get("controller.kind");
    if (kind == "hybrid") {
        throw Error(ErrorCode::ConfigError, "sweeps support controller.kind arps or baseline");
    }
    const SweepController c = kind == "arps" ? SweepController::Arps : SweepController::Baseline;
    SweepSettings s = SweepSettings::defaults(c);
    s.disturbance = resolve_disturbance(cfg);
    s.arps = ArpsParams{cfg.real("controller.alpha"), cfg.real("controller.T_c"),
                        cfg.real("controller.beta0")};
    s.baseline = BaselineParams{cfg.real("controller.K_bar"), cfg.real("controller.k0")};
    s.epsilon = cfg.real("controller.epsilon");
    s.sim.dt = cfg.real("sim.dt");
    s.sim.deadzone = cfg.real("sim.deadzone");
    if (const auto t = cfg.real_or_auto("sweep.t_end")) {
        s.sim.t_end = *t;
    } else {
        s.sim.t_end = c == SweepController::Arps ? s.arps.T_c : 5.0;
    }
    const long workers = cfg.integer("sweep.workers");
    if (workers < 0) throw Error(ErrorCode::ConfigError, "sweep.workers must be >= 0");
    s.workers = static_cast<unsigned>(workers);
    s.allow_wide = cfg.boolean("sweep.allow_wide");
    as_config_error([&] {
        s.sim.validate();
        if (c == SweepController::Arps) s.arps.validate();
        else s.baseline.validate();
        return 0;
    });
    return s;
}

AssumptionGrid resolve_assumption_grid(const Config& cfg) {
    const long tp = cfg.integer("verify.t_points");
    const long sp = cfg.integer("verify.sigma_points");
    if (tp < 1 || sp < 1) throw Error(ErrorCode::ConfigError, "verify grid needs at least one point per axis");
    const double t0 = cfg.real("verify.t_min"), t1 = cfg.real("verify.t_max");
    const double s0 = cfg.real("verify.sigma_min"), s1 = cfg.real("verify.sigma_max");
    if (t1 < t0 || s1 < s0) throw Error(ErrorCode::ConfigError, "verify grid bounds are reversed");
    const PlantSpec plant = resolve_plant(cfg);
    return AssumptionGrid{linspace(t0, t1, static_cast<std::size_t>(tp)),
                          box_grid(plant.m, s0, s1, static_cast<std::size_t>(sp))};
}

bool assumptions_hold(const AssumptionReport& r) noexcept {
    return r.rank_ok && r.q_est < 1.0 && 1.0 + r.q1_est > 0.0;
}

OracleSettings resolve_oracle(const Config& cfg, const AssumptionReport& assumptions) {
    OracleSettings s;
    s.plant = resolve_plant(cfg);
    s.disturbance = resolve_disturbance(cfg);
    s.arps = ArpsParams{cfg.real("controller.alpha"), cfg.real("controller.T_c"),
                        cfg.real("controller.beta0")};
    as_config_error([&] {
        s.arps.validate();
        return 0;
    });
    if (const auto v = cfg.reals("sim.sigma0"); !v.empty() && v.size() == s.plant.m) {
        s.sigma0 = Vec(s.plant.m);
        std::copy(v.begin(), v.end(), s.sigma0.begin());
    } else {
        s.sigma0 = symmetric_initial(cfg.real("sim.sigma0_n"), cfg.real("sim.sigma0_b"));
    }
    s.direct.dt = cfg.real("sim.dt");
    s.direct.t_end = 0.999 * s.arps.T_c;
    s.direct.record_stride = 1;
    s.direct.deadzone = cfg.real("sim.deadzone");
    s.scaled.dt = cfg.real("oracle.dtau");
    s.scaled.t_end = default_tau_max(ScaleMap{s.arps.alpha, s.arps.T_c});
    const long stride = cfg.integer("oracle.stride");
    if (stride < 1) throw Error(ErrorCode::ConfigError, "oracle.stride must be >= 1");
    s.scaled.record_stride = static_cast<std::size_t>(stride);
    s.scaled.deadzone = s.direct.deadzone;
    s.b0 = 1.0 + assumptions.q1_est;
    s.beta_star = s.b0 > 0.0 ? assumptions.d_est / s.b0 : 0.0;
    s.tolerance = cfg.real("oracle.tolerance");
    as_config_error([&] {
        s.direct.validate();
        s.scaled.validate();
        return 0;
    });
    return s;
}

}  // namespace arps
