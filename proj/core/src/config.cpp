#include "edgeib/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "edgeib/rng.hpp"

namespace edgeib {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw ConfigError("config: " + path + ": " + what);
}

void require_keys(const json& obj, const std::string& path,
                  const std::set<std::string>& allowed) {
    if (!obj.is_object()) fail(path, "expected an object");
    for (const auto& [key, _] : obj.items())
        if (!allowed.count(key)) fail(path, "unknown key '" + key + "'");
}

double get_num(const json& obj, const std::string& path, const char* key) {
    if (!obj.contains(key)) fail(path + "." + key, "missing required number");
    if (!obj[key].is_number()) fail(path + "." + key, "expected a number");
    return obj[key].get<double>();
}

double get_num_or(const json& obj, const std::string& path, const char* key, double dflt) {
    if (!obj.contains(key)) return dflt;
    if (!obj[key].is_number()) fail(path + "." + key, "expected a number");
    return obj[key].get<double>();
}

long get_int_or(const json& obj, const std::string& path, const char* key, long dflt) {
    if (!obj.contains(key)) return dflt;
    if (!obj[key].is_number_integer()) fail(path + "." + key, "expected an integer");
    return obj[key].get<long>();
}

bool get_bool_or(const json& obj, const std::string& path, const char* key, bool dflt) {
    if (!obj.contains(key)) return dflt;
    if (!obj[key].is_boolean()) fail(path + "." + key, "expected a boolean");
    return obj[key].get<bool>();
}

std::vector<double> get_num_array(const json& node, const std::string& path) {
    if (!node.is_array() || node.empty()) fail(path, "expected a nonempty array of numbers");
    std::vector<double> out;
    out.reserve(node.size());
    for (const auto& v : node) {
        if (!v.is_number()) fail(path, "expected numbers only");
        out.push_back(v.get<double>());
    }
    return out;
}

Eigen::MatrixXd get_matrix(const json& node, const std::string& path) {
    if (!node.is_array() || node.empty()) fail(path, "expected a nonempty 2-D array");
    const size_t rows = node.size();
    size_t cols = 0;
    Eigen::MatrixXd m;
    for (size_t i = 0; i < rows; ++i) {
        const auto& row = node[i];
        if (!row.is_array() || row.empty()) fail(path, "expected rows of numbers");
        if (i == 0) {
            cols = row.size();
            m.resize(rows, cols);
        } else if (row.size() != cols) {
            fail(path, "ragged rows");
        }
        for (size_t j = 0; j < cols; ++j) {
            if (!row[j].is_number()) fail(path, "expected numbers only");
            m(i, j) = row[j].get<double>();
        }
    }
    return m;
}

GaussianSource parse_source(const json& node, const std::string& path, std::uint64_t scenario_seed) {
    require_keys(node, path, {"synthetic", "explicit"});
    if (node.contains("synthetic") == node.contains("explicit"))
        fail(path, "need exactly one of 'synthetic' or 'explicit'");

    if (node.contains("synthetic")) {
        const auto& s = node["synthetic"];
        const std::string p = path + ".synthetic";
        require_keys(s, p, {"d_x", "d_y", "snr", "seed"});
        const long d_x = get_int_or(s, p, "d_x", 0);
        const long d_y = get_int_or(s, p, "d_y", 0);
        const double snr = get_num(s, p, "snr");
        std::uint64_t seed = static_cast<std::uint64_t>(get_int_or(s, p, "seed", 0));
        if (seed == 0) seed = derive_seed(scenario_seed, 2);
        return make_synthetic_source(static_cast<int>(d_x), static_cast<int>(d_y), snr, seed);
    }

    const auto& e = node["explicit"];
    const std::string p = path + ".explicit";
    require_keys(e, p, {"C_X", "C_Y", "C_XY"});
    GaussianSource src;
    if (!e.contains("C_X") || !e.contains("C_Y") || !e.contains("C_XY"))
        fail(p, "C_X, C_Y and C_XY are all required");
    src.C_X = get_matrix(e["C_X"], p + ".C_X");
    src.C_Y = get_matrix(e["C_Y"], p + ".C_Y");
    src.C_XY = get_matrix(e["C_XY"], p + ".C_XY");
    src.d_x = static_cast<int>(src.C_X.rows());
    src.d_y = static_cast<int>(src.C_Y.rows());
    src.validate();
    return src;
}

DeviceConfig parse_device(const json& node, const json& defaults, const std::string& path,
                          int index, const GaussianSource& source,
                          const std::vector<double>& shared_beta_grid) {
    static const std::set<std::string> keys = {
        "id", "eta_d", "f_d_max", "bandwidth", "noise_psd", "p_max", "distance",
        "beta_grid", "L_avg", "G_avg", "eps_step", "nu_step", "C_d_per_dt",
        "C_s_per_dt", "ceil_bits"};
    require_keys(node, path, keys);
    if (!defaults.is_null()) require_keys(defaults, "scenario.device_defaults", keys);

    json merged = defaults.is_null() ? json::object() : defaults;
    merged.update(node);

    DeviceConfig dev;
    dev.id = static_cast<int>(get_int_or(merged, path, "id", index));
    DeviceConfig ref;  // compiled-in defaults
    dev.eta_d = get_num_or(merged, path, "eta_d", ref.eta_d);
    dev.f_d_max = get_num_or(merged, path, "f_d_max", ref.f_d_max);
    dev.bandwidth = get_num_or(merged, path, "bandwidth", ref.bandwidth);
    dev.noise_psd = get_num_or(merged, path, "noise_psd", ref.noise_psd);
    dev.p_max = get_num_or(merged, path, "p_max", ref.p_max);
    dev.distance = get_num(merged, path, "distance");
    dev.L_avg = get_num_or(merged, path, "L_avg", ref.L_avg);
    dev.G_avg = get_num_or(merged, path, "G_avg", ref.G_avg);
    dev.eps_step = get_num_or(merged, path, "eps_step", ref.eps_step);
    dev.nu_step = get_num_or(merged, path, "nu_step", ref.nu_step);
    dev.C_d_per_dt = get_num_or(merged, path, "C_d_per_dt", source.d_x);
    dev.C_s_per_dt = get_num_or(merged, path, "C_s_per_dt", source.d_y);
    dev.ceil_bits = get_bool_or(merged, path, "ceil_bits", false);
    if (merged.contains("beta_grid")) {
        dev.beta_grid = get_num_array(merged["beta_grid"], path + ".beta_grid");
    } else {
        if (shared_beta_grid.empty()) fail(path + ".beta_grid", "missing (no scenario.beta_grid)");
        dev.beta_grid = shared_beta_grid;
    }
    dev.validate();
    return dev;
}

}  // namespace

Config parse_config(const std::string& json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config: not valid JSON: ") + e.what());
    }
    require_keys(root, "<root>", {"scenario", "output", "sweep", "curve"});
    if (!root.contains("scenario")) fail("scenario", "missing required block");

    Config cfg;
    const auto& sc = root["scenario"];
    require_keys(sc, "scenario",
                 {"seed", "horizon", "burn_in", "ctrl", "server", "channel", "source",
                  "devices", "device_defaults", "beta_grid", "record_slots", "record_queues"});

    cfg.scenario.seed = static_cast<std::uint64_t>(get_int_or(sc, "scenario", "seed", 1));
    cfg.scenario.horizon = get_int_or(sc, "scenario", "horizon", 1);
    cfg.scenario.burn_in = get_int_or(sc, "scenario", "burn_in", 0);
    cfg.scenario.record_slots = get_bool_or(sc, "scenario", "record_slots", false);
    cfg.scenario.record_queues = get_bool_or(sc, "scenario", "record_queues", false);

    if (sc.contains("ctrl")) {
        const auto& c = sc["ctrl"];
        require_keys(c, "scenario.ctrl", {"V", "serve_deadline_factor", "reactive_server_share"});
        ControlParams ref;
        cfg.scenario.ctrl.V = get_num_or(c, "scenario.ctrl", "V", ref.V);
        cfg.scenario.ctrl.serve_deadline_factor =
            get_num_or(c, "scenario.ctrl", "serve_deadline_factor", ref.serve_deadline_factor);
        cfg.scenario.ctrl.reactive_server_share =
            get_bool_or(c, "scenario.ctrl", "reactive_server_share", ref.reactive_server_share);
    }
    if (sc.contains("server")) {
        const auto& s = sc["server"];
        require_keys(s, "scenario.server", {"eta_s", "f_max"});
        ServerConfig ref;
        cfg.scenario.server.eta_s = get_num_or(s, "scenario.server", "eta_s", ref.eta_s);
        cfg.scenario.server.f_max = get_num_or(s, "scenario.server", "f_max", ref.f_max);
    }
    if (sc.contains("channel")) {
        const auto& ch = sc["channel"];
        require_keys(ch, "scenario.channel",
                     {"carrier_hz", "abg_alpha", "abg_beta_db", "abg_gamma", "fading", "seed"});
        ChannelModel ref;
        cfg.scenario.channel.carrier_hz = get_num_or(ch, "scenario.channel", "carrier_hz", ref.carrier_hz);
        cfg.scenario.channel.abg_alpha = get_num_or(ch, "scenario.channel", "abg_alpha", ref.abg_alpha);
        cfg.scenario.channel.abg_beta_db = get_num_or(ch, "scenario.channel", "abg_beta_db", ref.abg_beta_db);
        cfg.scenario.channel.abg_gamma = get_num_or(ch, "scenario.channel", "abg_gamma", ref.abg_gamma);
        cfg.scenario.channel.fading = get_bool_or(ch, "scenario.channel", "fading", ref.fading);
        cfg.scenario.channel.seed =
            static_cast<std::uint64_t>(get_int_or(ch, "scenario.channel", "seed", 0));
    }

    if (!sc.contains("source")) fail("scenario.source", "missing required block");
    cfg.scenario.sources.push_back(parse_source(sc["source"], "scenario.source", cfg.scenario.seed));

    std::vector<double> shared_grid;
    if (sc.contains("beta_grid")) shared_grid = get_num_array(sc["beta_grid"], "scenario.beta_grid");

    if (sc.contains("devices")) {
        const auto& devs = sc["devices"];
        if (!devs.is_array()) fail("scenario.devices", "expected an array");
        const json defaults = sc.contains("device_defaults") ? sc["device_defaults"] : json();
        for (size_t i = 0; i < devs.size(); ++i) {
            std::ostringstream path;
            path << "scenario.devices[" << i << "]";
            cfg.scenario.devices.push_back(parse_device(devs[i], defaults, path.str(),
                                                        static_cast<int>(i),
                                                        cfg.scenario.sources[0], shared_grid));
        }
    }

    if (root.contains("output")) {
        if (!root["output"].is_string()) fail("output", "expected a string");
        cfg.output = root["output"].get<std::string>();
    }
    if (root.contains("sweep")) {
        const auto& sw = root["sweep"];
        require_keys(sw, "sweep", {"V", "G_avg", "L_avg"});
        SweepGrid grid;
        if (!sw.contains("V") || !sw.contains("G_avg") || !sw.contains("L_avg"))
            fail("sweep", "V, G_avg and L_avg arrays are all required");
        grid.V = get_num_array(sw["V"], "sweep.V");
        grid.G_avg = get_num_array(sw["G_avg"], "sweep.G_avg");
        grid.L_avg = get_num_array(sw["L_avg"], "sweep.L_avg");
        cfg.sweep = grid;
    }
    if (root.contains("curve")) {
        const auto& cu = root["curve"];
        require_keys(cu, "curve", {"beta_grid"});
        if (!cu.contains("beta_grid")) fail("curve.beta_grid", "missing required array");
        cfg.curve = CurveParams{get_num_array(cu["beta_grid"], "curve.beta_grid")};
    }
    return cfg;
}

Config load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

}  // namespace edgeib
