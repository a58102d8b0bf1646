#ifndef AOI_CHANNEL_HPP
#define AOI_CHANNEL_HPP

#include "aoi/params.hpp"
#include "aoi/rng.hpp"

namespace aoi {

/// Achievable rate for channel gain g, in nats/s: B ln(1 + snr_scale * g).
double rate_of_gain(double g, const EffectiveLink& link, double bandwidth_hz);

/// Gain threshold G(r) equivalent to rate threshold r: the gain at which
/// rate_of_gain equals r exactly. Strictly increasing in r.
double gain_threshold(double r, const EffectiveLink& link, double bandwidth_hz);

/// Acceptance probability q(r) = exp(-lambda G(r)), strictly decreasing in r.
double accept_prob(double r, double gain_rate, const EffectiveLink& link,
                   double bandwidth_hz);

/// Density of the accepted (truncated) gain law: lambda e^{-lambda g} / q(r)
/// on [G(r), inf), zero below the threshold.
double truncated_gain_pdf(double g, double r, double gain_rate,
                          const EffectiveLink& link, double bandwidth_hz);

/// Probability that a contention slot with n active devices yields a unique
/// winner: n p (1-p)^{n-1}. Maximized at p = 1/n.
double contention_success_prob(double p, int n);

/// Exponential(lambda) channel gain sampler. Each sampler owns its generator;
/// never share one across workers.
class GainSampler {
public:
    GainSampler(std::uint64_t seed, double gain_rate, EffectiveLink link,
                double bandwidth_hz)
        : rng_(seed), gain_rate_(gain_rate), link_(link),
          bandwidth_hz_(bandwidth_hz) {}

    double sample_gain() { return rng_.exponential(gain_rate_); }

    /// Inverse-CDF draw from the truncated law: G(r) - ln(U)/lambda.
    double sample_accepted_gain(double r);

    Rng& rng() { return rng_; }

private:
    Rng rng_;
    double gain_rate_;
    EffectiveLink link_;
    double bandwidth_hz_;
};

}  // namespace aoi

#endif
