#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include "edgeib/simulator.hpp"

namespace edgeib {

/// Schema or validation failure in a config file. The CLI maps this (and
/// std::invalid_argument from domain validation) to exit code 2.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct CurveParams {
    std::vector<double> beta_grid;
};

/// Parsed experiment file. `scenario.devices` may be empty for configs that
/// only describe a source (gib-curve); commands validate what they need.
struct Config {
    Scenario scenario;
    std::string output = "out";
    std::optional<SweepGrid> sweep;
    std::optional<CurveParams> curve;
};

/// Parses and schema-checks a JSON config. Unknown keys are rejected with
/// an error naming the key; missing or ill-typed values name their path.
Config parse_config(const std::string& json_text);
Config load_config_file(const std::string& path);

}  // namespace edgeib
