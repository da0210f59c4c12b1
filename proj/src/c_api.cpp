#include "arps/arps.h"

#include <cstring>
#include <exception>
#include <memory>
#include <new>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "arps/config.hpp"
#include "arps/error.hpp"
#include "arps/experiments.hpp"
#include "arps/timescale.hpp"

struct arps_config {
    arps::Config cfg;
};

struct arps_runs {
    std::vector<arps::ScenarioReport> reports;
};

struct arps_sweep {
    arps::SweepResult result;
};

namespace {

constexpr const char* kVersion = "0.1.0";

thread_local std::string g_last_error;

arps_status status_for(arps::ErrorCode code) {
    using arps::ErrorCode;
    switch (code) {
        case ErrorCode::InvalidArgument: return ARPS_ERR_INVALID_ARGUMENT;
        case ErrorCode::ConfigError: return ARPS_ERR_CONFIG;
        case ErrorCode::IoError: return ARPS_ERR_IO;
        case ErrorCode::DomainError: return ARPS_ERR_DOMAIN;
        case ErrorCode::SingularMatrix:
        case ErrorCode::DeadzoneHit:
        case ErrorCode::TimeHorizonExceeded:
        case ErrorCode::BarrierBreached:
        case ErrorCode::NonFiniteState: return ARPS_ERR_SIMULATION;
    }
    return ARPS_ERR_INTERNAL;
}

arps_status fail(arps_status s, std::string msg) {
    g_last_error = std::move(msg);
    return s;
}

template <class F>
arps_status guarded(F&& f) {
    try {
        f();
        return ARPS_OK;
    } catch (const arps::Error& e) {
        return fail(status_for(e.code()), e.what());
    } catch (const std::bad_alloc&) {
        return fail(ARPS_ERR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(ARPS_ERR_INTERNAL, e.what());
    }
}

#define ARPS_REQUIRE(cond, what) \
    do {                         \
        if (!(cond)) return fail(ARPS_ERR_INVALID_ARGUMENT, what); \
    } while (0)

arps_run_status run_status(arps::Termination t) {
    switch (t) {
        case arps::Termination::Completed: return ARPS_RUN_COMPLETED;
        case arps::Termination::StoppedAtReach: return ARPS_RUN_STOPPED_AT_REACH;
        case arps::Termination::TimeHorizonExceeded: return ARPS_RUN_HORIZON_EXCEEDED;
        case arps::Termination::BarrierBreached: return ARPS_RUN_BARRIER_BREACHED;
        case arps::Termination::NonFiniteState: return ARPS_RUN_NON_FINITE;
        case arps::Termination::SingularMatrix: return ARPS_RUN_SINGULAR_MATRIX;
    }
    return ARPS_RUN_NON_FINITE;
}

arps_sweep_status sweep_status(arps::SweepStatus s) {
    switch (s) {
        case arps::SweepStatus::Reached: return ARPS_SWEEP_REACHED;
        case arps::SweepStatus::HorizonExceeded: return ARPS_SWEEP_HORIZON_EXCEEDED;
        case arps::SweepStatus::Fault: return ARPS_SWEEP_FAULT;
    }
    return ARPS_SWEEP_FAULT;
}

}  // namespace

extern "C" {

const char* arps_version(void) { return kVersion; }

const char* arps_last_error(void) { return g_last_error.c_str(); }

const char* arps_status_name(arps_status s) {
    switch (s) {
        case ARPS_OK: return "ok";
        case ARPS_ERR_INVALID_ARGUMENT: return "invalid argument";
        case ARPS_ERR_CONFIG: return "configuration error";
        case ARPS_ERR_SIMULATION: return "simulation fault";
        case ARPS_ERR_IO: return "i/o error";
        case ARPS_ERR_DOMAIN: return "domain error";
        case ARPS_ERR_INTERNAL: return "internal error";
    }
    return "unknown";
}

// Configuration ---------------------------------------------------------------

arps_status arps_config_create(arps_config** out) {
    ARPS_REQUIRE(out, "out is null");
    *out = nullptr;
    return guarded([&] { *out = new arps_config{}; });
}

void arps_config_destroy(arps_config* cfg) { delete cfg; }

arps_status arps_config_load(arps_config* cfg, const char* path, int scenario_override) {
    ARPS_REQUIRE(cfg && path, "config and path must be non-null");
    return guarded([&] {
        arps::Config next = cfg->cfg;
        next.load_file(path, scenario_override >= 0 ? std::optional<int>(scenario_override)
                                                    : std::nullopt);
        cfg->cfg = std::move(next);
    });
}

arps_status arps_config_set(arps_config* cfg, const char* key, const char* value) {
    ARPS_REQUIRE(cfg && key && value, "config, key and value must be non-null");
    return guarded([&] { cfg->cfg.set(key, value); });
}

arps_status arps_config_get(const arps_config* cfg, const char* key, char* buf, size_t buflen,
                            size_t* needed) {
    ARPS_REQUIRE(cfg && key, "config and key must be non-null");
    return guarded([&] {
        const std::string& v = cfg->cfg.get(key);
        if (needed) *needed = v.size() + 1;
        if (!buf) return;
        if (buflen <= v.size()) {
            if (buflen > 0) buf[0] = '\0';
            throw arps::Error(arps::ErrorCode::InvalidArgument,
                              "buffer too small for '" + std::string(key) + "': need " +
                                  std::to_string(v.size() + 1) + " bytes");
        }
        std::memcpy(buf, v.c_str(), v.size() + 1);
    });
}

arps_status arps_config_apply_scenario(arps_config* cfg, int scenario) {
    ARPS_REQUIRE(cfg, "config is null");
    return guarded([&] { cfg->cfg.apply_scenario(scenario); });
}

arps_status arps_config_apply_dense(arps_config* cfg) {
    ARPS_REQUIRE(cfg, "config is null");
    return guarded([&] { cfg->cfg.apply_dense(); });
}

arps_status arps_config_write(const arps_config* cfg, const char* path) {
    ARPS_REQUIRE(cfg && path, "config and path must be non-null");
    return guarded([&] { arps::write_text_file(path, cfg->cfg.to_text()); });
}

size_t arps_config_key_count(void) { return arps::config_keys().size(); }

const char* arps_config_key_name(size_t i) {
    const auto keys = arps::config_keys();
    return i < keys.size() ? keys[i].name : nullptr;
}

const char* arps_config_key_default(size_t i) {
    const auto keys = arps::config_keys();
    return i < keys.size() ? keys[i].default_value : nullptr;
}

const char* arps_config_key_help(size_t i) {
    const auto keys = arps::config_keys();
    return i < keys.size() ? keys[i].help : nullptr;
}

// Runs ------------------------------------------------------------------------

arps_status arps_simulate(const arps_config* cfg, arps_runs** out) {
    ARPS_REQUIRE(cfg && out, "config and out must be non-null");
    *out = nullptr;
    return guarded([&] {
        auto runs = std::make_unique<arps_runs>();
        for (const arps::SimulationCase& c : arps::resolve_cases(cfg->cfg)) {
            runs->reports.push_back(arps::run_case(c));
        }
        *out = runs.release();
    });
}

size_t arps_runs_count(const arps_runs* runs) { return runs ? runs->reports.size() : 0; }

arps_status arps_runs_info(const arps_runs* runs, size_t i, arps_run_info* out) {
    ARPS_REQUIRE(runs && out, "runs and out must be non-null");
    ARPS_REQUIRE(i < runs->reports.size(), "run index out of range");
    const arps::ScenarioReport& r = runs->reports[i];
    arps_run_info info{};
    info.status = run_status(r.result.status);
    info.reached = r.t_bar.has_value();
    info.t_bar = r.t_bar.value_or(0.0);
    info.norm_at_reach = r.result.reach ? r.result.reach->norm_at_event : 0.0;
    info.max_norm_after_switch = r.max_norm_after_switch;
    info.max_lambda = r.gain_stats.max_lambda;
    info.epsilon = r.epsilon;
    info.has_T_c = r.T_c.has_value();
    info.T_c = r.T_c.value_or(0.0);
    info.final_t = r.result.final_state.t;
    info.samples = r.result.series.samples.size();
    info.passed = r.passed();
    *out = info;
    return ARPS_OK;
}

const char* arps_runs_label(const arps_runs* runs, size_t i) {
    if (!runs || i >= runs->reports.size()) return nullptr;
    return runs->reports[i].label.c_str();
}

const char* arps_runs_message(const arps_runs* runs, size_t i) {
    if (!runs || i >= runs->reports.size()) return nullptr;
    return runs->reports[i].result.message.c_str();
}

arps_status arps_runs_mean_lambda(const arps_runs* runs, size_t i, double t0, double t1,
                                  double* out) {
    ARPS_REQUIRE(runs && out, "runs and out must be non-null");
    ARPS_REQUIRE(i < runs->reports.size(), "run index out of range");
    const auto m = arps::mean_lambda(runs->reports[i].result.series, t0, t1);
    if (!m) return fail(ARPS_ERR_DOMAIN, "no recorded samples in the requested window");
    *out = *m;
    return ARPS_OK;
}

arps_status arps_runs_write_csv(const arps_runs* runs, size_t i, const char* path) {
    ARPS_REQUIRE(runs && path, "runs and path must be non-null");
    ARPS_REQUIRE(i < runs->reports.size(), "run index out of range");
    return guarded([&] { arps::export_csv(runs->reports[i].result.series, path); });
}

arps_status arps_runs_write_envelope_csv(const arps_runs* runs, size_t i, const char* path) {
    ARPS_REQUIRE(runs && path, "runs and path must be non-null");
    ARPS_REQUIRE(i < runs->reports.size(), "run index out of range");
    return guarded([&] { arps::export_envelope_csv(runs->reports[i], path); });
}

arps_status arps_runs_write_svg(const arps_runs* runs, const char* kind, const char* path) {
    ARPS_REQUIRE(runs && kind && path, "runs, kind and path must be non-null");
    return guarded([&] {
        arps::export_svg(runs->reports, arps::plot_kind_from_string(kind), path);
    });
}

void arps_runs_destroy(arps_runs* runs) { delete runs; }

// Sweeps ----------------------------------------------------------------------

arps_status arps_sweep_run(const arps_config* cfg, arps_sweep** out) {
    ARPS_REQUIRE(cfg && out, "config and out must be non-null");
    *out = nullptr;
    return guarded([&] {
        const arps::SweepGrid grid = arps::resolve_grid(cfg->cfg);
        const arps::SweepSettings settings = arps::resolve_sweep(cfg->cfg);
        *out = new arps_sweep{arps::run_sweep(grid, settings)};
    });
}

size_t arps_sweep_count(const arps_sweep* sweep) { return sweep ? sweep->result.entries.size() : 0; }

arps_status arps_sweep_entry_get(const arps_sweep* sweep, size_t i, arps_sweep_entry* out) {
    ARPS_REQUIRE(sweep && out, "sweep and out must be non-null");
    ARPS_REQUIRE(i < sweep->result.entries.size(), "entry index out of range");
    const arps::SweepEntry& e = sweep->result.entries[i];
    *out = arps_sweep_entry{e.rho, e.n, e.b, e.t_bar.has_value(), e.t_bar.value_or(0.0),
                            sweep_status(e.status)};
    return ARPS_OK;
}

const char* arps_sweep_message(const arps_sweep* sweep, size_t i) {
    if (!sweep || i >= sweep->result.entries.size()) return nullptr;
    return sweep->result.entries[i].message.c_str();
}

int arps_sweep_all_reached(const arps_sweep* sweep) {
    return sweep && sweep->result.all_reached() ? 1 : 0;
}

arps_status arps_sweep_write_csv(const arps_sweep* sweep, const char* path) {
    ARPS_REQUIRE(sweep && path, "sweep and path must be non-null");
    return guarded([&] { arps::export_csv(sweep->result, path); });
}

arps_status arps_sweep_write_svg(const arps_sweep* sweep, const char* path) {
    ARPS_REQUIRE(sweep && path, "sweep and path must be non-null");
    return guarded([&] { arps::export_svg(sweep->result, path); });
}

void arps_sweep_destroy(arps_sweep* sweep) { delete sweep; }

// Verification ----------------------------------------------------------------

namespace {

arps::AssumptionReport assumptions_for(const arps::Config& cfg) {
    const arps::AssumptionGrid grid = arps::resolve_assumption_grid(cfg);
    return arps::check_assumptions(arps::resolve_plant(cfg), arps::resolve_disturbance(cfg),
                                   grid.t, grid.sigma);
}

}  // namespace

arps_status arps_check_assumptions(const arps_config* cfg, arps_assumption_report* out) {
    ARPS_REQUIRE(cfg && out, "config and out must be non-null");
    return guarded([&] {
        const arps::AssumptionReport r = assumptions_for(cfg->cfg);
        arps_assumption_report o{};
        o.rank_ok = r.rank_ok;
        o.q_est = r.q_est;
        o.q1_est = r.q1_est;
        o.d_est = r.d_est;
        o.b0 = 1.0 + r.q1_est;
        o.beta_star = o.b0 > 0.0 ? r.d_est / o.b0 : 0.0;
        o.grid_size = r.grid_size;
        o.singular_points = r.singular_points;
        o.passed = arps::assumptions_hold(r);
        *out = o;
    });
}

arps_status arps_run_oracle(const arps_config* cfg, const char* scaled_csv_path,
                            arps_oracle_report* out) {
    ARPS_REQUIRE(cfg && out, "config and out must be non-null");
    return guarded([&] {
        const arps::AssumptionReport a = assumptions_for(cfg->cfg);
        const arps::OracleSettings s = arps::resolve_oracle(cfg->cfg, a);
        const arps::OracleReport r = arps::run_oracle(s);
        if (scaled_csv_path) {
            std::ostringstream csv;
            arps::write_scaled_csv(r.scaled, csv);
            arps::write_text_file(scaled_csv_path, csv.str());
        }
        arps_oracle_report o{};
        o.deviation = r.deviation;
        o.deviation_half_step = r.deviation_half_step;
        o.tolerance = s.tolerance;
        o.max_V = r.max_V;
        o.max_forward_diff = r.max_forward_diff;
        o.beta_star = s.beta_star;
        o.b0 = s.b0;
        o.scaled_samples = r.scaled_samples;
        o.equivalence_ok = r.equivalence_ok;
        o.halving_ok = r.halving_ok;
        o.lyapunov_ok = r.lyapunov_ok;
        *out = o;
    });
}

// Manifest --------------------------------------------------------------------

arps_status arps_write_manifest(const arps_config* cfg, const char* path, const char* command,
                                const char* config_path, const char* output_dir,
                                const char* const* overrides, size_t n_overrides,
                                const char* const* outputs, size_t n_outputs) {
    ARPS_REQUIRE(cfg && path && command, "config, path and command must be non-null");
    ARPS_REQUIRE(n_overrides == 0 || overrides, "overrides is null");
    ARPS_REQUIRE(n_outputs == 0 || outputs, "outputs is null");
    return guarded([&] {
        nlohmann::ordered_json j;
        j["tool"] = "arps";
        j["tool_version"] = kVersion;
        j["command"] = command;
        j["config_path"] = config_path ? nlohmann::ordered_json(config_path) : nlohmann::ordered_json();
        j["output_dir"] = output_dir ? output_dir : ".";
        j["overrides"] = nlohmann::ordered_json::array();
        for (size_t i = 0; i < n_overrides; ++i) j["overrides"].push_back(overrides[i]);
        j["seeds"] = nlohmann::ordered_json::array();
        nlohmann::ordered_json resolved = nlohmann::ordered_json::object();
        for (const auto& [k, v] : cfg->cfg.entries()) resolved[k] = v;
        j["resolved_config"] = std::move(resolved);
        j["reproduce"] = std::string("arps ") + command + " --config " +
                         (output_dir ? output_dir : ".") + "/config.txt";
        j["outputs"] = nlohmann::ordered_json::array();
        for (size_t i = 0; i < n_outputs; ++i) j["outputs"].push_back(outputs[i]);
        arps::write_text_file(path, j.dump(2) + "\n");
    });
}

}  // extern "C"
