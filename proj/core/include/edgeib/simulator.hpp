#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "edgeib/scheduler.hpp"

namespace edgeib {

/// Complete description of a closed-loop experiment. `sources` holds either
/// one entry shared by every device or one entry per device.
struct Scenario {
    std::vector<DeviceConfig> devices;
    ServerConfig server;
    ChannelModel channel;
    std::vector<GaussianSource> sources;
    ControlParams ctrl;
    long horizon = 1;
    std::uint64_t seed = 1;
    long burn_in = 0;       // slots excluded from the averages
    bool record_slots = false;
    bool record_queues = false;

    void validate() const;
};

struct SlotRecord {
    long slot = 0;
    int k = 0;
    double h = 0.0, beta = 0.0, R = 0.0, f_d = 0.0, f_k = 0.0, f_c = 0.0;
    double Z = 0.0, S = 0.0;  // queue values at the start of the slot
    double L_tot = 0.0, G = 0.0, P_tot = 0.0;
};

struct QueueSample {
    long slot = 0;
    std::vector<double> Z, S;
};

struct DeviceFeasibility {
    int id = 0;
    double min_nmse = 1.0;          // best accuracy reachable on the beta grid
    double min_serve_latency = 0.0; // cheapest active beta at max resources, mean channel
    bool accuracy_feasible = true;
    bool latency_feasible = true;
};

struct FeasibilityReport {
    std::vector<DeviceFeasibility> devices;
    std::vector<std::string> warnings;
    bool feasible = true;
};

struct RunResult {
    double avg_power = 0.0;          // time average of P_tot, W
    double avg_device_power = 0.0;   // time average of sum_k (p_tx + p_dev), W
    std::vector<double> avg_power_per_device;
    std::vector<double> avg_latency;  // s, per device
    std::vector<double> avg_nmse;     // per device
    VirtualQueues final_queues;
    std::vector<std::string> warnings;
    std::vector<QueueSample> queue_traces;  // filled when record_queues
    std::vector<SlotRecord> slot_log;       // filled when record_slots
};

/// Static bounds check: reports per device the best reachable NMSE and the
/// smallest serving latency at maximum resources over the mean channel, and
/// flags targets outside those bounds. Infeasible targets make the queues
/// grow but never abort a run.
FeasibilityReport feasibility_check(const Scenario& scenario);

/// Closed-loop run: draw fading, decide, measure, update queues, repeat.
/// Deterministic given the scenario (including its seed).
RunResult run(const Scenario& scenario);

/// As `run`, with per-device accuracy models replacing the bottleneck NMSE
/// (entries may be null to keep the default).
RunResult run_with_accuracy(const Scenario& scenario,
                            std::span<const AccuracyModel* const> models);

struct SweepGrid {
    std::vector<double> V;
    std::vector<double> G_avg;
    std::vector<double> L_avg;
};

struct SweepPoint {
    double V = 0.0, G_avg = 0.0, L_avg = 0.0;
    RunResult result;
};

/// One independent run per (V, G_avg, L_avg) grid point, in that nesting
/// order, each with a seed derived from the base seed and the point index.
/// G_avg/L_avg grid values override every device's targets. `parallelism`
/// <= 1 runs sequentially; results are always in deterministic grid order.
std::vector<SweepPoint> sweep(const Scenario& base, const SweepGrid& grid,
                              int parallelism = 1);

/// CSV emission. Field orders are documented in the README.
void write_run_summary_csv(std::ostream& out, const Scenario& scenario, const RunResult& r);
void write_slot_log_csv(std::ostream& out, const RunResult& r);
void write_sweep_csv(std::ostream& out, const std::vector<SweepPoint>& points);

}  // namespace edgeib
