#ifndef AOI_SIMULATOR_HPP
#define AOI_SIMULATOR_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "aoi/channel.hpp"
#include "aoi/params.hpp"
#include "aoi/rng.hpp"

namespace aoi {

/// One round of the protocol: repeated contention competitions until a
/// winner accepts the channel, then the offload.
struct RoundRecord {
    int n;                            ///< active devices this round
    std::uint64_t competitions;       ///< K_n
    std::vector<std::uint64_t> slots; ///< J_{n,k} per competition
    double accepted_gain;
    double offload_time_s;            ///< T_n = D / R(accepted_gain)
    double contention_time_s;         ///< P_n = delta * sum J
};

/// One observation cycle: rounds n = N down to 1 with the sawtooth area.
struct CycleTrace {
    std::vector<RoundRecord> rounds;
    double cycle_len_s;   ///< C = sum(T_n + P_n)
    double area_s2;       ///< Q = sum S_n
};

struct EmpiricalMoments {
    double mean = 0.0;
    double second = 0.0;
    std::uint64_t samples = 0;
};

struct SimResult {
    std::uint64_t cycles;
    double mean_aoi_s;   ///< ratio of sums: sum Q / sum C
    double ci95_s;       ///< batch-means 95% half-width
    EmpiricalMoments t_moments;  ///< offload time T
    EmpiricalMoments p_moments;  ///< contention time P
    EmpiricalMoments k_moments;  ///< competitions per round
    EmpiricalMoments j_moments;  ///< slots per competition
    std::uint64_t seed;

    std::string to_json() const;
};

class Simulator {
public:
    /// slot_by_slot replaces the geometric draw of J with per-slot Bernoulli
    /// contention; distributionally identical, used for validation.
    Simulator(const SystemParams& params, std::uint64_t seed,
              bool slot_by_slot = false);

    RoundRecord run_round(int n, double p, double r);

    /// prev_last_T is T_1 of the preceding cycle: the age the sawtooth reset
    /// to right before this cycle's first round begins.
    CycleTrace run_cycle(double p, double r, double prev_last_T);

    /// Chains cycles across the boundary, discards a 100-cycle warm-up, and
    /// forms the ratio-of-sums estimate with a 100-batch CI.
    SimResult simulate(double p, double r, std::uint64_t n_cycles);

    /// Direct sampling of J, K, accepted gains, T and P without cycle
    /// structure, for moment validation.
    SimResult empirical_moment_suite(double p, double r,
                                     std::uint64_t n_samples);

    Rng& rng() { return rng_; }

private:
    double offload_time(double gain) const;

    SystemParams params_;
    EffectiveLink link_;
    Rng rng_;
    std::uint64_t seed_;
    bool slot_by_slot_;
};

/// Trapezoid area of one round's sawtooth segment: the age starts at T_next,
/// grows with slope 1 over P + T, so (1/2)(T_next + (T_next + P + T))(P + T).
double round_area(double t_next, double p_time, double t_time);

}  // namespace aoi

#endif
