#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "edgeib/config.hpp"

namespace edgeib {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;   // schema / validation errors
inline constexpr int kExitNumeric = 3;  // internal numerical failure

/// Command-line overrides applied on top of the config file.
struct CliOverrides {
    std::optional<std::uint64_t> seed;
    std::optional<long> horizon;
    std::optional<std::string> out;
    int parallel = 1;
    bool log_slots = false;
};

/// Writes <prefix>_curve.csv from the config's source and curve.beta_grid.
void cmd_gib_curve(const Config& cfg, const CliOverrides& ov, std::ostream& diag);

/// Runs the scenario; writes <prefix>_summary.csv and, with log_slots,
/// <prefix>_slots.csv. Feasibility warnings go to `diag`, not the exit code.
void cmd_simulate(const Config& cfg, const CliOverrides& ov, std::ostream& diag);

/// Runs the sweep grid; writes <prefix>_sweep.csv.
void cmd_sweep(const Config& cfg, const CliOverrides& ov, std::ostream& diag);

/// Full CLI entry point: parses args, dispatches, maps errors to exit codes.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace edgeib
