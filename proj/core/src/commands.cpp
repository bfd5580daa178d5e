#include "edgeib/commands.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "edgeib/numerics.hpp"

namespace edgeib {

namespace {

std::string output_prefix(const Config& cfg, const CliOverrides& ov) {
    return ov.out ? *ov.out : cfg.output;
}

std::ofstream open_output(const std::string& path) {
    const auto parent = std::filesystem::path(path).parent_path();
    if (!parent.empty()) std::filesystem::create_directories(parent);
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot open output file '" + path + "'");
    return out;
}

Scenario scenario_with_overrides(const Config& cfg, const CliOverrides& ov) {
    Scenario sc = cfg.scenario;
    if (ov.seed) sc.seed = *ov.seed;
    if (ov.horizon) sc.horizon = *ov.horizon;
    if (ov.log_slots) sc.record_slots = true;
    return sc;
}

void print_warnings(const std::vector<std::string>& warnings, std::ostream& diag) {
    for (const auto& w : warnings) diag << "warning: " << w << '\n';
}

}  // namespace

void cmd_gib_curve(const Config& cfg, const CliOverrides& ov, std::ostream& diag) {
    if (!cfg.curve) throw ConfigError("gib-curve: config has no 'curve' block");
    if (cfg.scenario.sources.empty())
        throw ConfigError("gib-curve: config has no 'scenario.source' block");

    const GibSolution sol = solve_gib(cfg.scenario.sources[0]);
    const auto curve = relevance_complexity_curve(sol, cfg.curve->beta_grid);

    const std::string path = output_prefix(cfg, ov) + "_curve.csv";
    auto out = open_output(path);
    write_curve_csv(out, curve);
    diag << "wrote " << path << " (" << curve.size() << " points)\n";
}

void cmd_simulate(const Config& cfg, const CliOverrides& ov, std::ostream& diag) {
    Scenario sc = scenario_with_overrides(cfg, ov);
    sc.validate();
    diag << "effective seed: " << sc.seed << '\n';

    const RunResult res = run(sc);
    print_warnings(res.warnings, diag);

    const std::string prefix = output_prefix(cfg, ov);
    {
        auto out = open_output(prefix + "_summary.csv");
        write_run_summary_csv(out, sc, res);
        diag << "wrote " << prefix << "_summary.csv\n";
    }
    if (sc.record_slots) {
        auto out = open_output(prefix + "_slots.csv");
        write_slot_log_csv(out, res);
        diag << "wrote " << prefix << "_slots.csv\n";
    }
}

void cmd_sweep(const Config& cfg, const CliOverrides& ov, std::ostream& diag) {
    if (!cfg.sweep) throw ConfigError("sweep: config has no 'sweep' block");
    Scenario sc = scenario_with_overrides(cfg, ov);
    sc.validate();
    diag << "effective seed: " << sc.seed << '\n';

    const auto points = sweep(sc, *cfg.sweep, ov.parallel);
    for (const auto& p : points) print_warnings(p.result.warnings, diag);

    const std::string path = output_prefix(cfg, ov) + "_sweep.csv";
    auto out = open_output(path);
    write_sweep_csv(out, points);
    diag << "wrote " << path << " (" << points.size() << " grid points)\n";
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Goal-oriented edge learning simulator: Gaussian bottleneck encoders "
                 "under Lyapunov-scheduled power, latency and accuracy trade-offs",
                 "edgeib"};
    app.require_subcommand(1);

    std::string config_path;
    CliOverrides ov;
    std::uint64_t seed_flag = 0;
    long horizon_flag = 0;
    std::string out_flag;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "JSON config file")->required();
        cmd->add_option("--seed", seed_flag, "override scenario.seed");
        cmd->add_option("--horizon", horizon_flag, "override scenario.horizon");
        cmd->add_option("--out", out_flag, "override output path prefix");
    };

    CLI::App* curve = app.add_subcommand("gib-curve", "emit the relevance/complexity curve CSV");
    add_common(curve);
    CLI::App* simulate = app.add_subcommand("simulate", "run one closed-loop scenario");
    add_common(simulate);
    simulate->add_flag("--log-slots", ov.log_slots, "also write the per-slot log CSV");
    CLI::App* sw = app.add_subcommand("sweep", "run the (V, G_avg, L_avg) grid");
    add_common(sw);
    sw->add_option("--parallel", ov.parallel, "worker threads for sweep points");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kExitConfig;
    }

    for (auto* cmd : {curve, simulate, sw}) {
        if (cmd->parsed()) {
            if (cmd->count("--seed")) ov.seed = seed_flag;
            if (cmd->count("--horizon")) ov.horizon = horizon_flag;
            if (cmd->count("--out")) ov.out = out_flag;
        }
    }

    try {
        const Config cfg = load_config_file(config_path);
        if (curve->parsed()) cmd_gib_curve(cfg, ov, out);
        if (simulate->parsed()) cmd_simulate(cfg, ov, out);
        if (sw->parsed()) cmd_sweep(cfg, ov, out);
        return kExitOk;
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const NumericalError& e) {
        err << "error: " << e.what() << '\n';
        return kExitNumeric;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitNumeric;
    }
}

}  // namespace edgeib
