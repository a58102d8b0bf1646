#include "aoi/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <json.hpp>

namespace aoi {

double round_area(double t_next, double p_time, double t_time) {
    return 0.5 * (t_next + (t_next + p_time + t_time)) * (p_time + t_time);
}

Simulator::Simulator(const SystemParams& params, std::uint64_t seed,
                     bool slot_by_slot)
    : params_(params), link_(EffectiveLink::from(params)), rng_(seed),
      seed_(seed), slot_by_slot_(slot_by_slot) {}

double Simulator::offload_time(double gain) const {
    return params_.data_nats / rate_of_gain(gain, link_, params_.bandwidth_hz);
}

RoundRecord Simulator::run_round(int n, double p, double r) {
    if (n < 1 || n > params_.n_devices)
        throw std::domain_error("run_round: n outside [1, N]");
    const double pn = contention_success_prob(p, n);
    const double g_thresh = gain_threshold(r, link_, params_.bandwidth_hz);

    RoundRecord rec;
    rec.n = n;
    rec.competitions = 0;
    std::uint64_t total_slots = 0;
    for (;;) {
        std::uint64_t j;
        if (slot_by_slot_) {
            j = 1;
            // a slot produces a winner iff exactly one device sends a pilot
            while (true) {
                int senders = 0;
                for (int dev = 0; dev < n; ++dev)
                    if (rng_.bernoulli(p)) ++senders;
                if (senders == 1) break;
                ++j;
            }
        } else {
            j = rng_.geometric(pn);
        }
        rec.slots.push_back(j);
        total_slots += j;
        ++rec.competitions;
        double gain = rng_.exponential(params_.gain_rate);
        if (gain >= g_thresh) {
            rec.accepted_gain = gain;
            break;
        }
    }
    rec.offload_time_s = offload_time(rec.accepted_gain);
    rec.contention_time_s = params_.slot_len_s * static_cast<double>(total_slots);
    return rec;
}

CycleTrace Simulator::run_cycle(double p, double r, double prev_last_T) {
    if (prev_last_T < 0)
        throw std::domain_error("run_cycle: prev_last_T must be >= 0");
    CycleTrace trace;
    trace.cycle_len_s = 0.0;
    trace.area_s2 = 0.0;
    double t_next = prev_last_T;  // T_{N+1} is T_1 of the previous cycle
    for (int n = params_.n_devices; n >= 1; --n) {
        RoundRecord rec = run_round(n, p, r);
        trace.cycle_len_s += rec.offload_time_s + rec.contention_time_s;
        trace.area_s2 +=
            round_area(t_next, rec.contention_time_s, rec.offload_time_s);
        t_next = rec.offload_time_s;
        trace.rounds.push_back(std::move(rec));
    }
    return trace;
}

SimResult Simulator::simulate(double p, double r, std::uint64_t n_cycles) {
    if (n_cycles < 1)
        throw std::domain_error("simulate: n_cycles must be >= 1");
    const std::uint64_t warmup = n_cycles > 200 ? 100 : 0;

    // steady-state start: the first sawtooth floor is one accepted offload draw
    GainSampler boot(seed_ ^ 0x9e3779b97f4a7c15ull, params_.gain_rate, link_,
                     params_.bandwidth_hz);
    double prev_last_T = offload_time(boot.sample_accepted_gain(r));

    double sum_q = 0.0, sum_c = 0.0;
    SimResult res{};
    res.seed = seed_;

    const std::uint64_t kept = n_cycles;
    const std::uint64_t n_batches = kept >= 200 ? 100 : 1;
    const std::uint64_t batch_len = kept / n_batches;
    std::vector<double> batch_q(n_batches, 0.0), batch_c(n_batches, 0.0);

    for (std::uint64_t m = 0; m < warmup + kept; ++m) {
        CycleTrace trace = run_cycle(p, r, prev_last_T);
        prev_last_T = trace.rounds.back().offload_time_s;  // T_1 of this cycle
        if (m < warmup) continue;
        std::uint64_t i = m - warmup;
        sum_q += trace.area_s2;
        sum_c += trace.cycle_len_s;
        std::uint64_t batch = std::min(i / batch_len, n_batches - 1);
        batch_q[batch] += trace.area_s2;
        batch_c[batch] += trace.cycle_len_s;
        for (const RoundRecord& rec : trace.rounds) {
            res.t_moments.mean += rec.offload_time_s;
            res.t_moments.second += rec.offload_time_s * rec.offload_time_s;
            ++res.t_moments.samples;
            res.p_moments.mean += rec.contention_time_s;
            res.p_moments.second += rec.contention_time_s * rec.contention_time_s;
            ++res.p_moments.samples;
            double k = static_cast<double>(rec.competitions);
            res.k_moments.mean += k;
            res.k_moments.second += k * k;
            ++res.k_moments.samples;
            for (std::uint64_t j : rec.slots) {
                double jd = static_cast<double>(j);
                res.j_moments.mean += jd;
                res.j_moments.second += jd * jd;
                ++res.j_moments.samples;
            }
        }
    }
    for (EmpiricalMoments* m :
         {&res.t_moments, &res.p_moments, &res.k_moments, &res.j_moments}) {
        if (m->samples > 0) {
            m->mean /= static_cast<double>(m->samples);
            m->second /= static_cast<double>(m->samples);
        }
    }
    res.cycles = kept;
    res.mean_aoi_s = sum_q / sum_c;

    if (n_batches > 1) {
        // batch-means over per-batch ratio estimates
        double mean_ratio = 0.0;
        for (std::uint64_t b = 0; b < n_batches; ++b)
            mean_ratio += batch_q[b] / batch_c[b];
        mean_ratio /= static_cast<double>(n_batches);
        double var = 0.0;
        for (std::uint64_t b = 0; b < n_batches; ++b) {
            double d = batch_q[b] / batch_c[b] - mean_ratio;
            var += d * d;
        }
        var /= static_cast<double>(n_batches - 1);
        res.ci95_s = 1.96 * std::sqrt(var / static_cast<double>(n_batches));
    } else {
        res.ci95_s = 0.0;
    }
    return res;
}

SimResult Simulator::empirical_moment_suite(double p, double r,
                                            std::uint64_t n_samples) {
    SimResult res{};
    res.seed = seed_;
    const double pn = contention_success_prob(p, params_.n_devices);
    const double g_thresh = gain_threshold(r, link_, params_.bandwidth_hz);
    for (std::uint64_t i = 0; i < n_samples; ++i) {
        double j = static_cast<double>(rng_.geometric(pn));
        res.j_moments.mean += j;
        res.j_moments.second += j * j;
        ++res.j_moments.samples;

        // K and P by direct replay of the acceptance loop
        std::uint64_t k = 0;
        double slots = 0.0;
        double gain;
        do {
            ++k;
            slots += static_cast<double>(rng_.geometric(pn));
            gain = rng_.exponential(params_.gain_rate);
        } while (gain < g_thresh);
        double kd = static_cast<double>(k);
        res.k_moments.mean += kd;
        res.k_moments.second += kd * kd;
        ++res.k_moments.samples;
        double p_time = params_.slot_len_s * slots;
        res.p_moments.mean += p_time;
        res.p_moments.second += p_time * p_time;
        ++res.p_moments.samples;

        double t = offload_time(gain);
        res.t_moments.mean += t;
        res.t_moments.second += t * t;
        ++res.t_moments.samples;
    }
    for (EmpiricalMoments* m :
         {&res.t_moments, &res.p_moments, &res.k_moments, &res.j_moments}) {
        m->mean /= static_cast<double>(m->samples);
        m->second /= static_cast<double>(m->samples);
    }
    res.cycles = 0;
    res.mean_aoi_s = 0.0;
    res.ci95_s = 0.0;
    return res;
}

std::string SimResult::to_json() const {
    nlohmann::json j;
    j["cycles"] = cycles;
    j["mean_aoi_s"] = mean_aoi_s;
    j["ci95_s"] = ci95_s;
    j["seed"] = seed;
    auto put = [&](const char* name, const EmpiricalMoments& m) {
        j[name] = {{"mean", m.mean}, {"second", m.second}, {"samples", m.samples}};
    };
    put("offload_time", t_moments);
    put("contention_time", p_moments);
    put("competitions", k_moments);
    put("slots_per_competition", j_moments);
    return j.dump(2);
}

}  // namespace aoi
