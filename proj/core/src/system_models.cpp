#include "edgeib/system_models.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "edgeib/rng.hpp"

namespace edgeib {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

void DeviceConfig::validate() const {
    if (!(eta_d > 0.0) || !(f_d_max > 0.0) || !(bandwidth > 0.0) || !(noise_psd > 0.0) ||
        !(p_max > 0.0) || !(distance > 0.0))
        throw std::invalid_argument("DeviceConfig: physical parameters must be > 0");
    if (beta_grid.empty())
        throw std::invalid_argument("DeviceConfig: beta_grid must be nonempty");
    for (size_t i = 0; i < beta_grid.size(); ++i) {
        if (!(beta_grid[i] > 0.0))
            throw std::invalid_argument("DeviceConfig: beta values must be > 0");
        if (i > 0 && !(beta_grid[i] > beta_grid[i - 1]))
            throw std::invalid_argument("DeviceConfig: beta_grid must be strictly ascending");
    }
    if (!(L_avg > 0.0))
        throw std::invalid_argument("DeviceConfig: L_avg must be > 0");
    if (!(G_avg > 0.0) || G_avg > 1.0)
        throw std::invalid_argument("DeviceConfig: G_avg must be in (0, 1]");
    if (!(eps_step > 0.0) || !(nu_step > 0.0))
        throw std::invalid_argument("DeviceConfig: queue steps must be > 0");
    if (!(C_d_per_dt > 0.0) || !(C_s_per_dt > 0.0))
        throw std::invalid_argument("DeviceConfig: per-dimension operation counts must be > 0");
}

void ServerConfig::validate() const {
    if (!(eta_s > 0.0) || !(f_max > 0.0))
        throw std::invalid_argument("ServerConfig: eta_s and f_max must be > 0");
}

void ChannelModel::validate() const {
    if (!(carrier_hz > 0.0))
        throw std::invalid_argument("ChannelModel: carrier_hz must be > 0");
    if (!(abg_alpha > 0.0))
        throw std::invalid_argument("ChannelModel: abg_alpha must be > 0");
}

double device_compute_power(double eta_d, double f_hz) {
    if (f_hz < 0.0)
        throw std::invalid_argument("device_compute_power: frequency must be >= 0");
    return eta_d * f_hz * f_hz * f_hz;
}

double server_power(double eta_s, double f_hz) { return device_compute_power(eta_s, f_hz); }

double tx_power(double bandwidth, double noise_psd, double gain, double rate) {
    if (!(gain > 0.0))
        throw std::invalid_argument("tx_power: channel gain must be > 0");
    if (rate < 0.0)
        throw std::invalid_argument("tx_power: rate must be >= 0");
    return bandwidth * noise_psd / gain * std::expm1(rate * M_LN2 / bandwidth);
}

double max_rate(double bandwidth, double noise_psd, double gain, double p_max) {
    if (!(gain > 0.0) || !(bandwidth > 0.0) || !(noise_psd > 0.0))
        throw std::invalid_argument("max_rate: bandwidth, noise and gain must be > 0");
    if (p_max < 0.0)
        throw std::invalid_argument("max_rate: p_max must be >= 0");
    return bandwidth * std::log2(1.0 + gain * p_max / (bandwidth * noise_psd));
}

StageDelays delays(const DeviceConfig& dev, int d_t, double relevance_bits,
                   double f_d, double rate, double f_k) {
    if (d_t < 0)
        throw std::invalid_argument("delays: d_t must be >= 0");

    auto stage = [](double workload, double resource) {
        if (workload <= 0.0) return 0.0;
        return resource > 0.0 ? workload / resource : kInf;
    };

    StageDelays d;
    d.L_p = stage(dev.C_d_per_dt * d_t, f_d);
    d.L_t = stage(relevance_bits, rate);
    d.L_s = stage(dev.C_s_per_dt * d_t, f_k);
    d.L_tot = d.L_p + d.L_t + d.L_s;
    return d;
}

double channel_gain(const ChannelModel& model, double distance,
                    std::uint64_t slot, std::uint64_t device, WarningLog* warnings) {
    if (distance < 1.0) {
        distance = 1.0;
        if (warnings) warnings->distance_clamps.fetch_add(1, std::memory_order_relaxed);
    }
    const double pl_db = 10.0 * model.abg_alpha * std::log10(distance) + model.abg_beta_db +
                         10.0 * model.abg_gamma * std::log10(model.carrier_hz / 1e9);
    double h = std::pow(10.0, -pl_db / 10.0);
    if (model.fading) {
        // One counter per (slot, device) pair keeps the stream parallel-safe.
        const std::uint64_t counter = slot * 0x100000000ULL + device;
        h *= exponential1(model.seed, counter);
    }
    return std::min(h, 1.0);
}

}  // namespace edgeib
