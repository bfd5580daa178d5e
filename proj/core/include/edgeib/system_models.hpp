#pragma once

#include <atomic>
#include <cstdint>
#include <vector>

#include "edgeib/gaussian_ib.hpp"

namespace edgeib {

/// Static per-device parameters. Defaults follow the reference urban
/// micro-cell setup: 1 kHz links, -174 dBm/Hz noise, 100 mW transmit cap,
/// 1.8 GHz CPUs with effective switched capacitance 2.57e-27 W s^3.
struct DeviceConfig {
    int id = 0;
    double eta_d = 2.57e-27;        // W s^3 in p = eta f^3
    double f_d_max = 1.8e9;         // Hz
    double bandwidth = 1e3;         // Hz
    double noise_psd = 3.9810717055349695e-21;  // W/Hz (-174 dBm/Hz)
    double p_max = 0.1;             // W
    double distance = 50.0;         // m
    std::vector<double> beta_grid;  // admissible IB trade-off values, ascending
    double L_avg = 0.05;            // s, average latency target
    double G_avg = 0.5;             // average NMSE target, in (0, 1]
    double eps_step = 1.0;          // latency queue step
    double nu_step = 1.0;           // accuracy queue step
    double C_d_per_dt = 0.0;        // device ops per encoder output dim (d_x)
    double C_s_per_dt = 0.0;        // server ops per encoder output dim (d_y)
    bool ceil_bits = false;         // round the payload up to whole bits

    void validate() const;
};

struct ServerConfig {
    double eta_s = 2.57e-27;  // W s^3
    double f_max = 1.8e9;     // Hz

    void validate() const;
};

/// Alpha-Beta-Gamma path loss with optional Rayleigh block fading:
///   PL_dB = 10 alpha log10(d / 1 m) + beta_dB + 10 gamma log10(f0 / 1 GHz)
struct ChannelModel {
    double carrier_hz = 1e9;
    double abg_alpha = 3.4;
    double abg_beta_db = 19.2;
    double abg_gamma = 2.3;
    bool fading = true;
    std::uint64_t seed = 0;

    void validate() const;
};

/// Per-slot physical outcomes for every device plus the server.
struct SlotMetrics {
    std::vector<double> p_tx;    // W
    std::vector<double> p_dev;   // W
    double p_srv = 0.0;          // W
    double p_tot = 0.0;          // W, sum of all terms
    std::vector<double> L_tot;   // s
    std::vector<double> L_p, L_t, L_s;  // s, per stage
    std::vector<double> G;       // NMSE actually delivered this slot
};

struct StageDelays {
    double L_p = 0.0;
    double L_t = 0.0;
    double L_s = 0.0;
    double L_tot = 0.0;
};

/// Counts recoverable model warnings (distance clamps, ...).
struct WarningLog {
    std::atomic<long> distance_clamps{0};
};

/// CPU power eta * f^3.
double device_compute_power(double eta_d, double f_hz);
double server_power(double eta_s, double f_hz);

/// Transmit power needed for rate R on a Shannon link:
///   p = (B N0 / h) (exp(R ln2 / B) - 1), the inverse of
///   R = B log2(1 + h p / (B N0)).
double tx_power(double bandwidth, double noise_psd, double gain, double rate);

/// Largest rate reachable under the transmit power cap.
double max_rate(double bandwidth, double noise_psd, double gain, double p_max);

/// Stage delays for a slot: compute C_d_per_dt*d_t ops at f_d, send
/// relevance_bits at rate R, estimate at the server share f_k with
/// C_s_per_dt*d_t ops. A zero workload costs nothing; a positive workload on
/// a zero resource yields an infinite-delay sentinel (never an exception).
StageDelays delays(const DeviceConfig& dev, int d_t, double relevance_bits,
                   double f_d, double rate, double f_k);

/// Power gain h in (0, 1], deterministic per (model.seed, slot, device).
/// Distances below 1 m are clamped to 1 m and counted in `warnings`.
double channel_gain(const ChannelModel& model, double distance,
                    std::uint64_t slot, std::uint64_t device,
                    WarningLog* warnings = nullptr);

/// Accuracy metric G(beta) used by the scheduler; the bottleneck NMSE by
/// default, replaceable by a table-driven model (e.g. classifier-derived).
class AccuracyModel {
  public:
    virtual ~AccuracyModel() = default;
    virtual double accuracy(double beta) const = 0;
};

class GibAccuracyModel final : public AccuracyModel {
  public:
    explicit GibAccuracyModel(const GibSolution& sol) : sol_(&sol) {}
    double accuracy(double beta) const override { return compute_nmse(*sol_, beta); }

  private:
    const GibSolution* sol_;
};

class ConstantAccuracyModel final : public AccuracyModel {
  public:
    explicit ConstantAccuracyModel(double g) : g_(g) {}
    double accuracy(double) const override { return g_; }

  private:
    double g_;
};

}  // namespace edgeib
