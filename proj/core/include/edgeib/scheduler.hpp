#pragma once

#include <span>
#include <vector>

#include "edgeib/system_models.hpp"

namespace edgeib {

/// Virtual queues tracking violations of the average latency (Z) and
/// average accuracy (S) constraints. Nonnegative at all times.
struct VirtualQueues {
    std::vector<double> Z;
    std::vector<double> S;

    static VirtualQueues zeros(size_t k) { return {std::vector<double>(k, 0.0), std::vector<double>(k, 0.0)}; }
};

/// One admissible encoder setting of a device, precomputed from its
/// bottleneck solution: output dimension, payload, workloads and accuracy.
struct BetaCandidate {
    double beta = 0.0;
    int d_t = 0;
    double relevance_bits = 0.0;  // I(T_beta; Y)
    double payload_bits = 0.0;    // transmitted bits (ceil of the above if configured)
    double c_dev_ops = 0.0;       // C_d_per_dt * d_t
    double c_srv_ops = 0.0;       // C_s_per_dt * d_t
    double accuracy = 1.0;        // G(beta); 1 when nothing is sent
};

using DeviceMenu = std::vector<BetaCandidate>;

DeviceMenu make_device_menu(const GibSolution& sol, const DeviceConfig& dev,
                            const AccuracyModel& accuracy);

struct ControlParams {
    double V = 1e3;  // drift-plus-penalty weight; larger favors low power

    // A device that serves a task while its latency queue is empty has no
    // well-posed rate/frequency optimum (the unconstrained minimizer is zero
    // resources, i.e. the task never completes). Serving candidates therefore
    // get per-stage resource floors sized so the slot finishes within
    // serve_deadline_factor * L_avg. Zero disables the floors and leaves the
    // bare closed-form optimizers, which is only safe for open-loop use.
    double serve_deadline_factor = 1.5;

    // Allocate the server split from the chosen workloads instead of the
    // worst case over the beta grid.
    bool reactive_server_share = false;

    void validate() const;
};

/// Control vector chosen for one slot.
struct SlotDecision {
    std::vector<double> f_d;      // device CPU frequencies, Hz
    std::vector<double> R;        // transmit rates, bit/s
    std::vector<double> beta;     // chosen trade-off parameters
    std::vector<double> f_split;  // server frequency shares, Hz
    double f_c = 0.0;             // server frequency, Hz
    std::vector<int> menu_index;  // chosen candidate per device, -1 = idle
    std::vector<double> device_objective;  // value minimized by the beta search
};

/// Queue update: Z += eps (L_tot - L_avg), S += nu (G - G_avg), floored at 0.
VirtualQueues update_queues(const VirtualQueues& q, const SlotMetrics& metrics,
                            std::span<const DeviceConfig> devs);

/// Rate minimizing eps Z payload / R + V tx_power(R) on [0, R_max(h)]:
///   R* = (2 B / ln2) W(sqrt(eps Z payload ln2 h / (4 B^2 V N0)))
double optimal_rate(double Z, double eps, double payload_bits, double gain,
                    const DeviceConfig& dev, double V);

/// Frequency minimizing eps Z C_d / f + V eta f^3 on [0, f_d_max]:
///   f* = (eps Z C_d / (3 V eta))^{1/4}
double optimal_device_freq(double Z, double eps, double c_dev_ops,
                           const DeviceConfig& dev, double V);

/// Server frequency and split minimizing sum_k eps_k Z_k C_k^s / f_k
/// + V eta f_c^3 subject to sum_k f_k <= f_c <= f_max. The unclamped optimum
/// has f_c = sqrt(sum_k sqrt(eps_k Z_k C_k^s)) / (3 V eta)^{1/4} and shares
/// proportional to sqrt(eps_k Z_k C_k^s); a cap rescales the shares.
struct ServerAllocation {
    double f_c = 0.0;
    std::vector<double> f_split;
};
ServerAllocation optimal_server_allocation(std::span<const double> Z,
                                           std::span<const double> eps,
                                           std::span<const double> c_srv_ops,
                                           const ServerConfig& srv, double V);

/// Solves the per-slot problem: for every device, searches its beta menu with
/// the closed-form rate/frequency per candidate and picks the minimizer of
///   eps Z (L_p + L_t) + nu S G(beta) + V (p_tx + p_dev)
/// (ties break to the smallest beta; staying idle is always a candidate),
/// then allocates the server once from the latency queues.
SlotDecision per_slot_decision(const VirtualQueues& q, std::span<const double> gains,
                               std::span<const DeviceMenu> menus,
                               std::span<const DeviceConfig> devs,
                               const ServerConfig& srv, const ControlParams& ctrl);

}  // namespace edgeib
