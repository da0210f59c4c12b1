// arps: command-line driver for simulations, reaching-time sweeps and checks.

#include <cstdio>
#include <algorithm>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "arps/arps.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitSimulation = 3;
constexpr int kExitIo = 4;
constexpr int kExitAssumption = 5;

int exit_code_for(arps_status s) {
    switch (s) {
        case ARPS_OK: return kExitOk;
        case ARPS_ERR_INVALID_ARGUMENT:
        case ARPS_ERR_CONFIG: return kExitConfig;
        case ARPS_ERR_IO: return kExitIo;
        case ARPS_ERR_SIMULATION:
        case ARPS_ERR_DOMAIN: return kExitSimulation;
        case ARPS_ERR_INTERNAL: break;
    }
    return 1;
}

struct Failure {
    int code;
};

void check(arps_status s, const char* what) {
    if (s == ARPS_OK) return;
    std::fprintf(stderr, "arps: %s: %s\n", what, arps_last_error());
    throw Failure{exit_code_for(s)};
}

std::string g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

struct ConfigHandle {
    arps_config* p = nullptr;
    ~ConfigHandle() { arps_config_destroy(p); }
};

struct Options {
    std::string config_path;
    std::string out_dir = "arps-out";
    std::optional<std::string> dt, stride, workers, t_end;
    std::optional<int> scenario;
    std::optional<std::string> plant, controller, rho, n_axis, b_axis, sigma0, sigma0_n, sigma0_b;
    bool dense = false;
    bool paper_step = false;
    bool oracle = false;
    bool wide = false;
    std::vector<std::string> sets;
};

// Flag -> config key, applied after the config file so flags win.
std::vector<std::string> apply_flags(arps_config* cfg, const Options& o, const std::string& cmd) {
    std::vector<std::string> applied;
    auto put = [&](const std::string& key, const std::string& value) {
        check(arps_config_set(cfg, key.c_str(), value.c_str()), ("--" + key).c_str());
        applied.push_back(key + "=" + value);
    };
    if (o.paper_step) put("sim.dt", "1e-6");
    if (o.dense) {
        check(arps_config_apply_dense(cfg), "--dense");
        applied.push_back("dense");
    }
    if (o.dt) put("sim.dt", *o.dt);
    if (o.stride) put("sim.stride", *o.stride);
    if (o.workers) put("sweep.workers", *o.workers);
    if (o.plant) put("plant.kind", *o.plant);
    if (o.controller) put("controller.kind", *o.controller);
    if (o.rho) put(cmd == "sweep" ? "sweep.rho" : "disturbance.rho", *o.rho);
    if (o.n_axis) put("sweep.n", *o.n_axis);
    if (o.b_axis) put("sweep.b", *o.b_axis);
    if (o.t_end) put(cmd == "sweep" ? "sweep.t_end" : "sim.t_end", *o.t_end);
    if (o.sigma0) put("sim.sigma0", *o.sigma0);
    if (o.sigma0_n) put("sim.sigma0_n", *o.sigma0_n);
    if (o.sigma0_b) put("sim.sigma0_b", *o.sigma0_b);
    if (o.wide) put("sweep.allow_wide", "true");
    for (const std::string& kv : o.sets) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) {
            std::fprintf(stderr, "arps: --set expects KEY=VALUE, got '%s'\n", kv.c_str());
            throw Failure{kExitConfig};
        }
        put(kv.substr(0, eq), kv.substr(eq + 1));
    }
    return applied;
}

std::string out_path(const Options& o, const std::string& name) {
    return (std::filesystem::path(o.out_dir) / name).string();
}

void make_out_dir(const Options& o) {
    std::error_code ec;
    std::filesystem::create_directories(o.out_dir, ec);
    if (ec) {
        std::fprintf(stderr, "arps: cannot create output directory %s: %s\n", o.out_dir.c_str(),
                     ec.message().c_str());
        throw Failure{kExitIo};
    }
}

void finish_outputs(arps_config* cfg, const Options& o, const std::string& cmd,
                    const std::vector<std::string>& overrides, std::vector<std::string> outputs) {
    check(arps_config_write(cfg, out_path(o, "config.txt").c_str()), "writing config");
    outputs.push_back("config.txt");
    std::vector<const char*> ov, out;
    for (const auto& s : overrides) ov.push_back(s.c_str());
    for (const auto& s : outputs) out.push_back(s.c_str());
    check(arps_write_manifest(cfg, out_path(o, "manifest.json").c_str(), cmd.c_str(),
                              o.config_path.empty() ? nullptr : o.config_path.c_str(),
                              o.out_dir.c_str(), ov.data(), ov.size(), out.data(), out.size()),
          "writing manifest");
}

const char* run_status_name(arps_run_status s) {
    switch (s) {
        case ARPS_RUN_COMPLETED: return "Completed";
        case ARPS_RUN_STOPPED_AT_REACH: return "StoppedAtReach";
        case ARPS_RUN_HORIZON_EXCEEDED: return "TimeHorizonExceeded";
        case ARPS_RUN_BARRIER_BREACHED: return "BarrierBreached";
        case ARPS_RUN_NON_FINITE: return "NonFiniteState";
        case ARPS_RUN_SINGULAR_MATRIX: return "SingularMatrix";
    }
    return "Unknown";
}

const char* sweep_status_name(arps_sweep_status s) {
    switch (s) {
        case ARPS_SWEEP_REACHED: return "Reached";
        case ARPS_SWEEP_HORIZON_EXCEEDED: return "HorizonExceeded";
        case ARPS_SWEEP_FAULT: return "Fault";
    }
    return "Unknown";
}

int cmd_simulate(arps_config* cfg, const Options& o, const std::vector<std::string>& overrides) {
    arps_runs* raw = nullptr;
    check(arps_simulate(cfg, &raw), "simulate");
    std::unique_ptr<arps_runs, void (*)(arps_runs*)> runs(raw, arps_runs_destroy);
    make_out_dir(o);

    std::vector<std::string> outputs;
    int code = kExitOk;
    for (size_t i = 0; i < arps_runs_count(runs.get()); ++i) {
        arps_run_info info{};
        check(arps_runs_info(runs.get(), i, &info), "run info");
        const std::string label = arps_runs_label(runs.get(), i);
        check(arps_runs_write_csv(runs.get(), i, out_path(o, label + ".csv").c_str()), "writing csv");
        check(arps_runs_write_envelope_csv(runs.get(), i, out_path(o, label + "_envelope.csv").c_str()),
              "writing envelope csv");
        outputs.push_back(label + ".csv");
        outputs.push_back(label + "_envelope.csv");

        std::printf("%s status=%s t_bar=%s max_norm_after_switch=%s max_lambda=%s samples=%zu\n",
                    label.c_str(), run_status_name(info.status),
                    info.reached ? g17(info.t_bar).c_str() : "none",
                    g17(info.max_norm_after_switch).c_str(), g17(info.max_lambda).c_str(),
                    info.samples);
        if (info.status != ARPS_RUN_COMPLETED && info.status != ARPS_RUN_STOPPED_AT_REACH) {
            std::fprintf(stderr, "arps: %s: %s: %s\n", label.c_str(), run_status_name(info.status),
                         arps_runs_message(runs.get(), i));
            code = kExitSimulation;
        }
    }
    for (const char* kind : {"norm", "gain", "input"}) {
        const std::string name = std::string(kind) + ".svg";
        check(arps_runs_write_svg(runs.get(), kind, out_path(o, name).c_str()), "writing svg");
        outputs.push_back(name);
    }
    finish_outputs(cfg, o, "simulate", overrides, outputs);
    return code;
}

int cmd_sweep(arps_config* cfg, const Options& o, const std::vector<std::string>& overrides) {
    arps_sweep* raw = nullptr;
    check(arps_sweep_run(cfg, &raw), "sweep");
    std::unique_ptr<arps_sweep, void (*)(arps_sweep*)> sweep(raw, arps_sweep_destroy);
    make_out_dir(o);

    double lo = 0.0, hi = 0.0;
    bool any = false;
    for (size_t i = 0; i < arps_sweep_count(sweep.get()); ++i) {
        arps_sweep_entry e{};
        check(arps_sweep_entry_get(sweep.get(), i, &e), "sweep entry");
        std::printf("rho=%s n=%d b=%s t_bar=%s status=%s\n", g17(e.rho).c_str(), e.n,
                    g17(e.b).c_str(), e.reached ? g17(e.t_bar).c_str() : "none",
                    sweep_status_name(e.status));
        if (e.status == ARPS_SWEEP_FAULT) {
            std::fprintf(stderr, "arps: rho=%s n=%d b=%s: %s\n", g17(e.rho).c_str(), e.n,
                         g17(e.b).c_str(), arps_sweep_message(sweep.get(), i));
        }
        if (e.reached) {
            lo = any ? std::min(lo, e.t_bar) : e.t_bar;
            hi = any ? std::max(hi, e.t_bar) : e.t_bar;
            any = true;
        }
    }
    if (any) std::printf("t_bar min=%s max=%s\n", g17(lo).c_str(), g17(hi).c_str());

    check(arps_sweep_write_csv(sweep.get(), out_path(o, "sweep.csv").c_str()), "writing csv");
    check(arps_sweep_write_svg(sweep.get(), out_path(o, "rt_surface.svg").c_str()), "writing svg");
    finish_outputs(cfg, o, "sweep", overrides, {"sweep.csv", "rt_surface.svg"});
    return arps_sweep_all_reached(sweep.get()) ? kExitOk : kExitSimulation;
}

int cmd_verify(arps_config* cfg, const Options& o, const std::vector<std::string>& overrides) {
    arps_assumption_report a{};
    check(arps_check_assumptions(cfg, &a), "verify");
    std::printf("rank_ok=%s\nq_est=%s\nq1_est=%s\nd_est=%s\nb0=%s\nbeta_star=%s\ngrid_size=%zu\n"
                "singular_points=%zu\nassumptions=%s\n",
                a.rank_ok ? "true" : "false", g17(a.q_est).c_str(), g17(a.q1_est).c_str(),
                g17(a.d_est).c_str(), g17(a.b0).c_str(), g17(a.beta_star).c_str(), a.grid_size,
                a.singular_points, a.passed ? "PASS" : "FAIL");
    if (!a.passed) {
        std::fprintf(stderr, "arps: assumption check failed on the grid\n");
        return kExitAssumption;
    }
    if (!o.oracle) return kExitOk;

    make_out_dir(o);
    arps_oracle_report r{};
    check(arps_run_oracle(cfg, out_path(o, "scaled.csv").c_str(), &r), "oracle");
    std::printf("deviation=%s\ntolerance=%s\nequivalence=%s\ndeviation_half_step=%s\nhalving=%s\n"
                "max_V=%s\nmax_forward_diff=%s\nlyapunov=%s\n",
                g17(r.deviation).c_str(), g17(r.tolerance).c_str(),
                r.equivalence_ok ? "PASS" : "FAIL", g17(r.deviation_half_step).c_str(),
                r.halving_ok ? "PASS" : "FAIL", g17(r.max_V).c_str(),
                g17(r.max_forward_diff).c_str(), r.lyapunov_ok ? "PASS" : "FAIL");
    finish_outputs(cfg, o, "verify", overrides, {"scaled.csv"});
    if (!(r.equivalence_ok && r.halving_ok && r.lyapunov_ok)) {
        std::fprintf(stderr, "arps: time-scale oracle check failed\n");
        return kExitAssumption;
    }
    return kExitOk;
}

std::string key_table() {
    std::string s = "\nConfig file keys (key = value, '#' comments):\n";
    for (size_t i = 0; i < arps_config_key_count(); ++i) {
        std::string line = std::string("  ") + arps_config_key_name(i);
        line.resize(std::max<size_t>(line.size() + 1, 36), ' ');
        const std::string def = arps_config_key_default(i);
        s += line + arps_config_key_help(i) + " [default: " + (def.empty() ? "empty" : def) + "]\n";
    }
    return s;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Adaptive reaching-phase sliding mode simulator"};
    app.set_version_flag("--version", arps_version());
    app.require_subcommand(1);
    app.footer(key_table());

    Options o;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", o.config_path, "Config file to load (key = value lines)");
        sub->add_option("--out", o.out_dir, "Output directory [default: arps-out]");
        sub->add_option("--dt", o.dt, "Euler step [config: sim.dt]");
        sub->add_option("--stride", o.stride, "Record every k-th step [config: sim.stride]");
        sub->add_option("--scenario", o.scenario, "Study preset 0|1|2 [config: scenario]");
        sub->add_flag("--paper-step", o.paper_step, "Use dt = 1e-6 [config: sim.dt = 1e-6]");
        sub->add_option("--plant", o.plant, "revisited|motivating [config: plant.kind]");
        sub->add_option("--controller", o.controller,
                        "arps|baseline|hybrid [config: controller.kind]");
        sub->add_option("--set", o.sets, "Any config key as KEY=VALUE (repeatable)");
    };

    CLI::App* sim = app.add_subcommand("simulate", "Run the closed loop and write CSV/SVG traces");
    add_common(sim);
    sim->add_option("--rho", o.rho, "Disturbance amplitude [config: disturbance.rho]");
    sim->add_option("--sigma0", o.sigma0, "Initial sigma as a comma list [config: sim.sigma0]");
    sim->add_option("--sigma0-n", o.sigma0_n, "Initial exponent n [config: sim.sigma0_n]");
    sim->add_option("--sigma0-b", o.sigma0_b, "Initial scale b [config: sim.sigma0_b]");
    sim->add_option("--t-end", o.t_end, "Horizon in seconds or auto [config: sim.t_end]");

    CLI::App* sweep = app.add_subcommand("sweep", "Reaching time over a (rho, n, b) grid");
    add_common(sweep);
    sweep->add_option("--rho", o.rho, "Comma list of rho values [config: sweep.rho]");
    sweep->add_option("--n", o.n_axis, "Comma list of exponents [config: sweep.n]");
    sweep->add_option("--b", o.b_axis, "Comma list of scales [config: sweep.b]");
    sweep->add_option("--t-end", o.t_end, "Per-point horizon or auto [config: sweep.t_end]");
    sweep->add_flag("--dense", o.dense,
                    "Full standard ranges at finer resolution [config: sweep.rho, sweep.n, sweep.b]");
    sweep->add_option("--workers", o.workers, "Worker threads, 0 = all cores [config: sweep.workers]");
    sweep->add_flag("--wide", o.wide, "Allow axes outside the standard ranges [config: sweep.allow_wide]");

    CLI::App* verify = app.add_subcommand("verify", "Check plant assumptions on a grid");
    add_common(verify);
    verify->add_option("--rho", o.rho, "Disturbance amplitude [config: disturbance.rho]");
    verify->add_option("--sigma0-n", o.sigma0_n, "Oracle initial exponent n [config: sim.sigma0_n]");
    verify->add_option("--sigma0-b", o.sigma0_b, "Oracle initial scale b [config: sim.sigma0_b]");
    verify->add_flag("--oracle", o.oracle,
                     "Also run the time-scale equivalence and Lyapunov checks [config: oracle.*]");

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    const std::string cmd = app.get_subcommands().front()->get_name();
    try {
        ConfigHandle cfg;
        check(arps_config_create(&cfg.p), "config");
        const int scenario_override = o.scenario.value_or(-1);
        if (!o.config_path.empty()) {
            check(arps_config_load(cfg.p, o.config_path.c_str(), scenario_override), "config");
        } else if (o.scenario) {
            check(arps_config_apply_scenario(cfg.p, *o.scenario), "--scenario");
        }
        std::vector<std::string> overrides;
        if (o.scenario) overrides.push_back("scenario=" + std::to_string(*o.scenario));
        const auto flags = apply_flags(cfg.p, o, cmd);
        overrides.insert(overrides.end(), flags.begin(), flags.end());

        if (cmd == "simulate") return cmd_simulate(cfg.p, o, overrides);
        if (cmd == "sweep") return cmd_sweep(cfg.p, o, overrides);
        return cmd_verify(cfg.p, o, overrides);
    } catch (const Failure& f) {
        return f.code;
    }
}
