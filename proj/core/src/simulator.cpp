#include "edgeib/simulator.hpp"

#include <atomic>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "edgeib/rng.hpp"

namespace edgeib {

void Scenario::validate() const {
    if (devices.empty())
        throw std::invalid_argument("Scenario: device list must be nonempty");
    if (horizon < 1)
        throw std::invalid_argument("Scenario: horizon must be >= 1");
    if (burn_in < 0 || burn_in >= horizon)
        throw std::invalid_argument("Scenario: burn_in must be in [0, horizon)");
    if (sources.size() != 1 && sources.size() != devices.size())
        throw std::invalid_argument("Scenario: need one shared source or one per device");
    for (const auto& d : devices) d.validate();
    server.validate();
    channel.validate();
    ctrl.validate();
    if (ctrl.serve_deadline_factor <= 0.0)
        throw std::invalid_argument("Scenario: closed-loop runs need serve_deadline_factor > 0");
}

namespace {

struct Prepared {
    std::vector<GibSolution> solutions;  // one per unique source
    std::vector<size_t> sol_index;       // device -> solution
    std::vector<DeviceMenu> menus;
};

Prepared prepare(const Scenario& sc, std::span<const AccuracyModel* const> models) {
    Prepared p;
    const size_t k_count = sc.devices.size();
    p.sol_index.resize(k_count);
    if (sc.sources.size() == 1) {
        p.solutions.push_back(solve_gib(sc.sources[0]));
        for (size_t k = 0; k < k_count; ++k) p.sol_index[k] = 0;
    } else {
        p.solutions.reserve(k_count);
        for (size_t k = 0; k < k_count; ++k) {
            p.solutions.push_back(solve_gib(sc.sources[k]));
            p.sol_index[k] = k;
        }
    }
    p.menus.reserve(k_count);
    for (size_t k = 0; k < k_count; ++k) {
        const GibSolution& sol = p.solutions[p.sol_index[k]];
        GibAccuracyModel fallback(sol);
        const AccuracyModel* model = (k < models.size() && models[k]) ? models[k] : &fallback;
        p.menus.push_back(make_device_menu(sol, sc.devices[k], *model));
    }
    return p;
}

FeasibilityReport feasibility_from_menus(const Scenario& sc, const Prepared& prep) {
    FeasibilityReport rep;
    for (size_t k = 0; k < sc.devices.size(); ++k) {
        const DeviceConfig& dev = sc.devices[k];
        DeviceFeasibility f;
        f.id = dev.id;

        const double h_mean = channel_gain({.carrier_hz = sc.channel.carrier_hz,
                                            .abg_alpha = sc.channel.abg_alpha,
                                            .abg_beta_db = sc.channel.abg_beta_db,
                                            .abg_gamma = sc.channel.abg_gamma,
                                            .fading = false,
                                            .seed = 0},
                                           dev.distance, 0, 0);
        const double r_max = max_rate(dev.bandwidth, dev.noise_psd, h_mean, dev.p_max);

        double best_latency = std::numeric_limits<double>::infinity();
        bool any_active = false;
        for (const auto& c : prep.menus[k]) {
            f.min_nmse = std::min(f.min_nmse, c.accuracy);
            if (c.d_t == 0) continue;
            any_active = true;
            const StageDelays d = delays(dev, c.d_t, c.payload_bits, dev.f_d_max, r_max,
                                         sc.server.f_max);
            best_latency = std::min(best_latency, d.L_tot);
        }
        f.min_serve_latency = any_active ? best_latency : 0.0;

        if (dev.G_avg < f.min_nmse) {
            f.accuracy_feasible = false;
            std::ostringstream msg;
            msg << "device " << dev.id << ": accuracy target G_avg=" << dev.G_avg
                << " is below the best reachable NMSE " << f.min_nmse
                << " on its beta grid";
            rep.warnings.push_back(msg.str());
        }
        if (any_active && dev.L_avg < f.min_serve_latency) {
            f.latency_feasible = false;
            std::ostringstream msg;
            msg << "device " << dev.id << ": latency target L_avg=" << dev.L_avg
                << " is below the minimum serving latency " << f.min_serve_latency
                << " at maximum resources";
            rep.warnings.push_back(msg.str());
        }
        rep.feasible = rep.feasible && f.accuracy_feasible && f.latency_feasible;
        rep.devices.push_back(f);
    }
    return rep;
}

RunResult run_prepared(const Scenario& sc, const Prepared& prep) {
    const size_t k_count = sc.devices.size();
    const std::uint64_t channel_seed = derive_seed(sc.seed, sc.channel.seed);
    ChannelModel channel = sc.channel;
    channel.seed = channel_seed;

    WarningLog warnings;
    RunResult res;
    FeasibilityReport feas = feasibility_from_menus(sc, prep);
    res.warnings = feas.warnings;

    VirtualQueues q = VirtualQueues::zeros(k_count);
    std::vector<double> gains(k_count);
    SlotMetrics m;
    m.p_tx.resize(k_count);
    m.p_dev.resize(k_count);
    m.L_tot.resize(k_count);
    m.L_p.resize(k_count);
    m.L_t.resize(k_count);
    m.L_s.resize(k_count);
    m.G.resize(k_count);

    double power_acc = 0.0, device_power_acc = 0.0;
    std::vector<double> dev_power_acc(k_count, 0.0), latency_acc(k_count, 0.0),
        nmse_acc(k_count, 0.0);
    long counted = 0;

    for (long t = 0; t < sc.horizon; ++t) {
        for (size_t k = 0; k < k_count; ++k)
            gains[k] = channel_gain(channel, sc.devices[k].distance, static_cast<std::uint64_t>(t),
                                    static_cast<std::uint64_t>(k), &warnings);

        const SlotDecision dec = per_slot_decision(q, gains, prep.menus, sc.devices, sc.server,
                                                   sc.ctrl);

        double sum_dev_power = 0.0;
        for (size_t k = 0; k < k_count; ++k) {
            const DeviceConfig& dev = sc.devices[k];
            static const BetaCandidate idle{};
            const BetaCandidate& c = dec.menu_index[k] >= 0 ? prep.menus[k][dec.menu_index[k]]
                                                            : idle;
            const StageDelays sd = delays(dev, c.d_t, c.payload_bits, dec.f_d[k], dec.R[k],
                                          dec.f_split[k]);
            m.L_p[k] = sd.L_p;
            m.L_t[k] = sd.L_t;
            m.L_s[k] = sd.L_s;
            m.L_tot[k] = sd.L_tot;
            m.p_tx[k] = dec.R[k] > 0.0 ? tx_power(dev.bandwidth, dev.noise_psd, gains[k], dec.R[k])
                                       : 0.0;
            m.p_dev[k] = device_compute_power(dev.eta_d, dec.f_d[k]);
            m.G[k] = c.d_t > 0 ? c.accuracy : 1.0;
            sum_dev_power += m.p_tx[k] + m.p_dev[k];
        }
        m.p_srv = server_power(sc.server.eta_s, dec.f_c);
        m.p_tot = sum_dev_power + m.p_srv;

        if (t >= sc.burn_in) {
            power_acc += m.p_tot;
            device_power_acc += sum_dev_power;
            for (size_t k = 0; k < k_count; ++k) {
                dev_power_acc[k] += m.p_tx[k] + m.p_dev[k];
                latency_acc[k] += m.L_tot[k];
                nmse_acc[k] += m.G[k];
            }
            ++counted;
        }
        if (sc.record_slots) {
            for (size_t k = 0; k < k_count; ++k) {
                SlotRecord rec;
                rec.slot = t;
                rec.k = static_cast<int>(k);
                rec.h = gains[k];
                rec.beta = dec.beta[k];
                rec.R = dec.R[k];
                rec.f_d = dec.f_d[k];
                rec.f_k = dec.f_split[k];
                rec.f_c = dec.f_c;
                rec.Z = q.Z[k];
                rec.S = q.S[k];
                rec.L_tot = m.L_tot[k];
                rec.G = m.G[k];
                rec.P_tot = m.p_tot;
                res.slot_log.push_back(rec);
            }
        }
        q = update_queues(q, m, sc.devices);
        if (sc.record_queues) res.queue_traces.push_back({t, q.Z, q.S});
    }

    res.avg_power = power_acc / counted;
    res.avg_device_power = device_power_acc / counted;
    res.avg_power_per_device.resize(k_count);
    res.avg_latency.resize(k_count);
    res.avg_nmse.resize(k_count);
    for (size_t k = 0; k < k_count; ++k) {
        res.avg_power_per_device[k] = dev_power_acc[k] / counted;
        res.avg_latency[k] = latency_acc[k] / counted;
        res.avg_nmse[k] = nmse_acc[k] / counted;
    }
    res.final_queues = q;

    if (const long clamps = warnings.distance_clamps.load(); clamps > 0) {
        std::ostringstream msg;
        msg << "channel model clamped " << clamps << " sub-metre distances to 1 m";
        res.warnings.push_back(msg.str());
    }
    return res;
}

}  // namespace

FeasibilityReport feasibility_check(const Scenario& scenario) {
    scenario.validate();
    return feasibility_from_menus(scenario, prepare(scenario, {}));
}

RunResult run(const Scenario& scenario) { return run_with_accuracy(scenario, {}); }

RunResult run_with_accuracy(const Scenario& scenario,
                            std::span<const AccuracyModel* const> models) {
    scenario.validate();
    return run_prepared(scenario, prepare(scenario, models));
}

std::vector<SweepPoint> sweep(const Scenario& base, const SweepGrid& grid, int parallelism) {
    base.validate();
    if (grid.V.empty() || grid.G_avg.empty() || grid.L_avg.empty())
        throw std::invalid_argument("sweep: every grid axis must be nonempty");

    const Prepared prep = prepare(base, {});

    std::vector<SweepPoint> points;
    for (double v : grid.V)
        for (double g : grid.G_avg)
            for (double l : grid.L_avg) points.push_back({v, g, l, {}});

    auto run_point = [&](size_t i) {
        Scenario sc = base;
        sc.ctrl.V = points[i].V;
        for (auto& d : sc.devices) {
            d.G_avg = points[i].G_avg;
            d.L_avg = points[i].L_avg;
        }
        sc.seed = derive_seed(base.seed, i + 1);
        sc.validate();
        points[i].result = run_prepared(sc, prep);
    };

    const int workers = std::min<int>(std::max(parallelism, 1), static_cast<int>(points.size()));
    if (workers <= 1) {
        for (size_t i = 0; i < points.size(); ++i) run_point(i);
    } else {
        std::atomic<size_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (int w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (size_t i = next.fetch_add(1); i < points.size(); i = next.fetch_add(1))
                    run_point(i);
            });
        for (auto& th : pool) th.join();
    }
    return points;
}

void write_run_summary_csv(std::ostream& out, const Scenario& scenario, const RunResult& r) {
    out << "scope,avg_power_w,avg_latency_s,avg_nmse,l_avg_target,g_avg_target,final_Z,final_S\n";
    out.precision(17);
    const size_t k_count = scenario.devices.size();
    double lat_mean = 0.0, nmse_mean = 0.0, z_mean = 0.0, s_mean = 0.0;
    for (size_t k = 0; k < k_count; ++k) {
        const DeviceConfig& dev = scenario.devices[k];
        out << dev.id << ',' << r.avg_power_per_device[k] << ',' << r.avg_latency[k] << ','
            << r.avg_nmse[k] << ',' << dev.L_avg << ',' << dev.G_avg << ','
            << r.final_queues.Z[k] << ',' << r.final_queues.S[k] << '\n';
        lat_mean += r.avg_latency[k] / k_count;
        nmse_mean += r.avg_nmse[k] / k_count;
        z_mean += r.final_queues.Z[k] / k_count;
        s_mean += r.final_queues.S[k] / k_count;
    }
    out << "all," << r.avg_power << ',' << lat_mean << ',' << nmse_mean << ",,,"
        << z_mean << ',' << s_mean << '\n';
}

void write_slot_log_csv(std::ostream& out, const RunResult& r) {
    out << "slot,k,h,beta,R,f_d,f_k,f_c,Z,S,L_tot,G,P_tot\n";
    out.precision(17);
    for (const auto& rec : r.slot_log) {
        out << rec.slot << ',' << rec.k << ',' << rec.h << ',' << rec.beta << ',' << rec.R << ','
            << rec.f_d << ',' << rec.f_k << ',' << rec.f_c << ',' << rec.Z << ',' << rec.S << ','
            << rec.L_tot << ',' << rec.G << ',' << rec.P_tot << '\n';
    }
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepPoint>& points) {
    out << "V,g_avg,l_avg,k,avg_power_w,avg_device_power_w,avg_latency_s,avg_nmse\n";
    out.precision(17);
    for (const auto& p : points) {
        for (size_t k = 0; k < p.result.avg_latency.size(); ++k) {
            out << p.V << ',' << p.G_avg << ',' << p.L_avg << ',' << k << ',' << p.result.avg_power
                << ',' << p.result.avg_device_power << ',' << p.result.avg_latency[k] << ','
                << p.result.avg_nmse[k] << '\n';
        }
    }
}

}  // namespace edgeib
