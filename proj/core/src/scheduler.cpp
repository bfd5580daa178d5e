#include "edgeib/scheduler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "edgeib/numerics.hpp"

namespace edgeib {

void ControlParams::validate() const {
    if (V < 0.0)
        throw std::invalid_argument("ControlParams: V must be >= 0");
    if (serve_deadline_factor < 0.0)
        throw std::invalid_argument("ControlParams: serve_deadline_factor must be >= 0");
}

DeviceMenu make_device_menu(const GibSolution& sol, const DeviceConfig& dev,
                            const AccuracyModel& accuracy) {
    dev.validate();
    DeviceMenu menu;
    menu.reserve(dev.beta_grid.size());
    for (double beta : dev.beta_grid) {
        GibOperatingPoint op = operating_point(sol, beta);
        BetaCandidate c;
        c.beta = beta;
        c.d_t = op.n_beta;
        c.relevance_bits = op.relevance_bits;
        c.payload_bits = dev.ceil_bits ? std::ceil(op.relevance_bits) : op.relevance_bits;
        c.c_dev_ops = dev.C_d_per_dt * op.n_beta;
        c.c_srv_ops = dev.C_s_per_dt * op.n_beta;
        // An encoder with no active component delivers nothing, so the slot
        // accuracy is the prior NMSE no matter what the model says.
        c.accuracy = op.n_beta > 0 ? accuracy.accuracy(beta) : 1.0;
        menu.push_back(c);
    }
    return menu;
}

VirtualQueues update_queues(const VirtualQueues& q, const SlotMetrics& metrics,
                            std::span<const DeviceConfig> devs) {
    VirtualQueues next = q;
    for (size_t k = 0; k < devs.size(); ++k) {
        next.Z[k] = std::max(0.0, q.Z[k] + devs[k].eps_step * (metrics.L_tot[k] - devs[k].L_avg));
        next.S[k] = std::max(0.0, q.S[k] + devs[k].nu_step * (metrics.G[k] - devs[k].G_avg));
    }
    return next;
}

double optimal_rate(double Z, double eps, double payload_bits, double gain,
                    const DeviceConfig& dev, double V) {
    if (!(gain > 0.0))
        throw std::invalid_argument("optimal_rate: channel gain must be > 0");
    const double r_max = max_rate(dev.bandwidth, dev.noise_psd, gain, dev.p_max);
    const double pressure = eps * Z * payload_bits;
    if (pressure <= 0.0) return 0.0;
    if (V == 0.0) return r_max;  // pure queue stabilization

    const double b = dev.bandwidth;
    const double arg = std::sqrt(pressure * M_LN2 * gain / (4.0 * b * b * V * dev.noise_psd));
    const double r = 2.0 * b / M_LN2 * lambert_w0(arg);
    return std::clamp(r, 0.0, r_max);
}

double optimal_device_freq(double Z, double eps, double c_dev_ops,
                           const DeviceConfig& dev, double V) {
    const double pressure = eps * Z * c_dev_ops;
    if (pressure <= 0.0) return 0.0;
    if (V == 0.0) return dev.f_d_max;
    const double f = std::pow(pressure / (3.0 * V * dev.eta_d), 0.25);
    return std::clamp(f, 0.0, dev.f_d_max);
}

ServerAllocation optimal_server_allocation(std::span<const double> Z,
                                           std::span<const double> eps,
                                           std::span<const double> c_srv_ops,
                                           const ServerConfig& srv, double V) {
    const size_t k_count = Z.size();
    if (eps.size() != k_count || c_srv_ops.size() != k_count)
        throw std::invalid_argument("optimal_server_allocation: input size mismatch");

    ServerAllocation out;
    out.f_split.assign(k_count, 0.0);

    std::vector<double> root(k_count, 0.0);
    double root_sum = 0.0;
    for (size_t k = 0; k < k_count; ++k) {
        root[k] = std::sqrt(std::max(0.0, eps[k] * Z[k] * c_srv_ops[k]));
        root_sum += root[k];
    }
    if (root_sum == 0.0) return out;

    if (V == 0.0) {
        out.f_c = srv.f_max;
        for (size_t k = 0; k < k_count; ++k) out.f_split[k] = srv.f_max * root[k] / root_sum;
        return out;
    }

    const double denom = std::pow(3.0 * V * srv.eta_s, 0.25);
    const double f_c_unclamped = std::sqrt(root_sum) / denom;
    const double scale = f_c_unclamped > srv.f_max ? srv.f_max / f_c_unclamped : 1.0;
    out.f_c = scale * f_c_unclamped;
    for (size_t k = 0; k < k_count; ++k)
        out.f_split[k] = scale * root[k] / (std::sqrt(root_sum) * denom);
    return out;
}

namespace {

struct DeviceChoice {
    int menu_index = -1;  // -1: idle, nothing computed or sent
    double beta = 0.0;
    double rate = 0.0;
    double freq = 0.0;
    double objective = 0.0;
};

double device_objective(double Z, double eps, double nu, double S, double V,
                        const DeviceConfig& dev, const BetaCandidate& c,
                        double rate, double freq, double gain) {
    double obj = nu * S * c.accuracy;
    if (c.d_t > 0) {
        if (Z > 0.0) {
            const double l_p = freq > 0.0 ? c.c_dev_ops / freq : std::numeric_limits<double>::infinity();
            const double l_t = rate > 0.0 ? c.payload_bits / rate : std::numeric_limits<double>::infinity();
            obj += eps * Z * (l_p + l_t);
        }
        obj += V * (tx_power(dev.bandwidth, dev.noise_psd, gain, rate) +
                    device_compute_power(dev.eta_d, freq));
    }
    return obj;
}

DeviceChoice choose_for_device(double Z, double S, double gain, const DeviceMenu& menu,
                               const DeviceConfig& dev, const ControlParams& ctrl) {
    const double eps = dev.eps_step;
    const double nu = dev.nu_step;
    const double r_max = max_rate(dev.bandwidth, dev.noise_psd, gain, dev.p_max);
    const double budget =
        ctrl.serve_deadline_factor > 0.0 ? ctrl.serve_deadline_factor * dev.L_avg / 3.0 : 0.0;

    DeviceChoice best;
    best.beta = menu.front().beta;
    best.objective = nu * S * 1.0;  // idle: nothing sent, prior accuracy

    for (size_t i = 0; i < menu.size(); ++i) {
        const BetaCandidate& c = menu[i];
        DeviceChoice cand;
        cand.menu_index = static_cast<int>(i);
        cand.beta = c.beta;
        if (c.d_t > 0) {
            cand.rate = optimal_rate(Z, eps, c.payload_bits, gain, dev, ctrl.V);
            cand.freq = optimal_device_freq(Z, eps, c.c_dev_ops, dev, ctrl.V);
            if (budget > 0.0) {
                cand.rate = std::max(cand.rate, c.payload_bits / budget);
                cand.freq = std::max(cand.freq, c.c_dev_ops / budget);
            }
            cand.rate = std::min(cand.rate, r_max);
            cand.freq = std::min(cand.freq, dev.f_d_max);
        }
        cand.objective = device_objective(Z, eps, nu, S, ctrl.V, dev, c, cand.rate, cand.freq, gain);
        if (cand.objective < best.objective) best = cand;
    }
    return best;
}

}  // namespace

SlotDecision per_slot_decision(const VirtualQueues& q, std::span<const double> gains,
                               std::span<const DeviceMenu> menus,
                               std::span<const DeviceConfig> devs,
                               const ServerConfig& srv, const ControlParams& ctrl) {
    ctrl.validate();
    const size_t k_count = devs.size();
    if (q.Z.size() != k_count || q.S.size() != k_count || gains.size() != k_count ||
        menus.size() != k_count)
        throw std::invalid_argument("per_slot_decision: input size mismatch");
    for (const auto& menu : menus)
        if (menu.empty()) throw std::invalid_argument("per_slot_decision: empty device menu");

    SlotDecision d;
    d.f_d.resize(k_count);
    d.R.resize(k_count);
    d.beta.resize(k_count);
    d.menu_index.resize(k_count);
    d.device_objective.resize(k_count);

    std::vector<double> eps(k_count), c_srv(k_count);
    for (size_t k = 0; k < k_count; ++k) {
        const DeviceChoice choice = choose_for_device(q.Z[k], q.S[k], gains[k], menus[k],
                                                      devs[k], ctrl);
        d.f_d[k] = choice.freq;
        d.R[k] = choice.rate;
        d.beta[k] = choice.beta;
        d.menu_index[k] = choice.menu_index;
        d.device_objective[k] = choice.objective;

        eps[k] = devs[k].eps_step;
        if (ctrl.reactive_server_share) {
            c_srv[k] = choice.menu_index >= 0 ? menus[k][choice.menu_index].c_srv_ops : 0.0;
        } else {
            // Worst case over the grid; d_t is nondecreasing in beta.
            c_srv[k] = 0.0;
            for (const auto& c : menus[k]) c_srv[k] = std::max(c_srv[k], c.c_srv_ops);
        }
    }

    ServerAllocation alloc = optimal_server_allocation(q.Z, eps, c_srv, srv, ctrl.V);
    if (ctrl.serve_deadline_factor > 0.0) {
        for (size_t k = 0; k < k_count; ++k) {
            if (d.menu_index[k] < 0) continue;
            const BetaCandidate& c = menus[k][d.menu_index[k]];
            if (c.d_t == 0) continue;
            const double budget = ctrl.serve_deadline_factor * devs[k].L_avg / 3.0;
            alloc.f_split[k] = std::max(alloc.f_split[k], c.c_srv_ops / budget);
        }
    }
    double split_sum = 0.0;
    for (double f : alloc.f_split) split_sum += f;
    double f_c = std::max(alloc.f_c, split_sum);
    if (f_c > srv.f_max) {
        const double scale = split_sum > 0.0 ? srv.f_max / split_sum : 0.0;
        for (double& f : alloc.f_split) f *= scale;
        f_c = srv.f_max;
    }
    d.f_split = std::move(alloc.f_split);
    d.f_c = f_c;
    return d;
}

}  // namespace edgeib
