#ifndef AOI_RNG_HPP
#define AOI_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>

namespace aoi {

/// Seeded deterministic generator. All distribution transforms are explicit
/// inverse-CDF so a fixed seed yields the same stream on any platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    /// Uniform on (0, 1], 53-bit resolution. Never returns 0, so logs are safe.
    double uniform() {
        return (static_cast<double>(gen_() >> 11) + 1.0) * 0x1.0p-53;
    }

    double exponential(double rate) { return -std::log(uniform()) / rate; }

    /// Geometric on {1, 2, ...} with success probability theta.
    std::uint64_t geometric(double theta) {
        if (theta <= 0.0 || theta > 1.0)
            throw std::domain_error("geometric: theta outside (0,1]");
        if (theta == 1.0) return 1;
        double u = uniform();
        double j = std::ceil(std::log(u) / std::log1p(-theta));
        return j < 1.0 ? 1 : static_cast<std::uint64_t>(j);
    }

    bool bernoulli(double p) { return uniform() <= p; }

private:
    std::mt19937_64 gen_;
};

}  // namespace aoi

#endif
