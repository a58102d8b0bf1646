#include "aoi/channel.hpp"

#include <cmath>
#include <stdexcept>

namespace aoi {

double rate_of_gain(double g, const EffectiveLink& link, double bandwidth_hz) {
    if (g < 0) throw std::domain_error("rate_of_gain: negative gain");
    return bandwidth_hz * std::log1p(link.snr_scale * g);
}

double gain_threshold(double r, const EffectiveLink& link, double bandwidth_hz) {
    if (!(r > 0)) throw std::domain_error("gain_threshold: r must be > 0");
    return std::expm1(r / bandwidth_hz) / link.snr_scale;
}

double accept_prob(double r, double gain_rate, const EffectiveLink& link,
                   double bandwidth_hz) {
    return std::exp(-gain_rate * gain_threshold(r, link, bandwidth_hz));
}

double truncated_gain_pdf(double g, double r, double gain_rate,
                          const EffectiveLink& link, double bandwidth_hz) {
    double threshold = gain_threshold(r, link, bandwidth_hz);
    if (g < threshold) return 0.0;
    // lambda e^{-lambda g} / q(r) = lambda e^{-lambda (g - G(r))}
    return gain_rate * std::exp(-gain_rate * (g - threshold));
}

double contention_success_prob(double p, int n) {
    if (!(p > 0.0 && p < 1.0))
        throw std::domain_error("contention_success_prob: p outside (0,1)");
    if (n < 1) throw std::domain_error("contention_success_prob: n < 1");
    return n * p * std::pow(1.0 - p, n - 1);
}

double GainSampler::sample_accepted_gain(double r) {
    double threshold = gain_threshold(r, link_, bandwidth_hz_);
    return threshold + rng_.exponential(gain_rate_);
}

}  // namespace aoi
