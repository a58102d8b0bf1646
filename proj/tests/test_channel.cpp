#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <vector>

#include "aoi/channel.hpp"
#include "aoi/params.hpp"
#include "aoi/quadrature.hpp"

using namespace aoi;

namespace {
SystemParams defaults() { return SystemParams{}; }
}

TEST_CASE("free-space path loss") {
    CHECK(path_loss_db(1.0, 1.0) == doctest::Approx(32.4));
    CHECK(path_loss_db(2.0, 1.0) == doctest::Approx(32.4 + 20.0 * std::log10(2.0)));
    // default link: 500 m at 4.8 GHz is about 100 dB
    CHECK(path_loss_db(0.5, 4800.0) == doctest::Approx(100.0042).epsilon(1e-5));
    CHECK_THROWS_AS(path_loss_db(0.0, 1.0), std::domain_error);
    CHECK_THROWS_AS(path_loss_db(1.0, -5.0), std::domain_error);
}

TEST_CASE("effective link SNR scale") {
    SystemParams p = defaults();
    EffectiveLink link = EffectiveLink::from(p);
    // 1 W through ~100 dB loss over 1e-11 W noise power: scale near 10
    CHECK(link.snr_scale == doctest::Approx(10.0).epsilon(0.01));

    p.apply_path_loss = false;
    CHECK(EffectiveLink::from(p).snr_scale == doctest::Approx(1e11));
}

TEST_CASE("rate of gain") {
    SystemParams p = defaults();
    EffectiveLink link = EffectiveLink::from(p);
    CHECK(rate_of_gain(0.0, link, p.bandwidth_hz) == 0.0);
    double g_unit = (std::exp(1.0) - 1.0) / link.snr_scale;
    CHECK(rate_of_gain(g_unit, link, p.bandwidth_hz) ==
          doctest::Approx(p.bandwidth_hz).epsilon(1e-12));
    CHECK_THROWS_AS(rate_of_gain(-1.0, link, p.bandwidth_hz), std::domain_error);
}

TEST_CASE("gain threshold inverts the rate") {
    SystemParams p = defaults();
    EffectiveLink link = EffectiveLink::from(p);
    CHECK(gain_threshold(p.bandwidth_hz * std::log(2.0), link, p.bandwidth_hz) ==
          doctest::Approx(1.0 / link.snr_scale));
    for (double r = 1e3; r < 1e7; r *= 2.0) {
        double g = gain_threshold(r, link, p.bandwidth_hz);
        CHECK(rate_of_gain(g, link, p.bandwidth_hz) ==
              doctest::Approx(r).epsilon(1e-12));
    }
    CHECK_THROWS_AS(gain_threshold(0.0, link, p.bandwidth_hz), std::domain_error);
}

TEST_CASE("acceptance probability") {
    SystemParams p = defaults();
    EffectiveLink link = EffectiveLink::from(p);
    double prev = 1.0;
    for (double r = 1e4; r < 6e6; r *= 1.5) {
        double q = accept_prob(r, p.gain_rate, link, p.bandwidth_hz);
        CHECK(q > 0.0);
        CHECK(q < prev);  // strictly decreasing, G strictly increasing
        CHECK(q == doctest::Approx(std::exp(
                       -p.gain_rate * gain_threshold(r, link, p.bandwidth_hz))));
        prev = q;
    }
    CHECK(accept_prob(1e-6, p.gain_rate, link, p.bandwidth_hz) ==
          doctest::Approx(1.0));
}

TEST_CASE("acceptance probability matches sampled gains") {
    SystemParams p = defaults();
    EffectiveLink link = EffectiveLink::from(p);
    double r = p.bandwidth_hz * std::log(2.0) * 3.0;  // q well inside (0,1)
    double q = accept_prob(r, p.gain_rate, link, p.bandwidth_hz);
    double g_thresh = gain_threshold(r, link, p.bandwidth_hz);

    GainSampler sampler(42, p.gain_rate, link, p.bandwidth_hz);
    const int n = 1000000;
    int accepted = 0;
    for (int i = 0; i < n; ++i)
        if (sampler.sample_gain() >= g_thresh) ++accepted;
    double q_hat = static_cast<double>(accepted) / n;
    CHECK(std::abs(q_hat - q) / q < 0.01);
    // 3-sigma binomial band
    CHECK(std::abs(q_hat - q) <= 3.0 * std::sqrt(q * (1.0 - q) / n));
}

TEST_CASE("truncated gain density") {
    SystemParams p = defaults();
    EffectiveLink link = EffectiveLink::from(p);
    double r = 2e6;
    double g_thresh = gain_threshold(r, link, p.bandwidth_hz);
    CHECK(truncated_gain_pdf(0.5 * g_thresh, r, p.gain_rate, link,
                             p.bandwidth_hz) == 0.0);
    // at the threshold the q(r) normalization cancels to lambda exactly
    CHECK(truncated_gain_pdf(g_thresh, r, p.gain_rate, link, p.bandwidth_hz) ==
          doctest::Approx(p.gain_rate));

    auto pdf = [&](double g) {
        return truncated_gain_pdf(g, r, p.gain_rate, link, p.bandwidth_hz);
    };
    double u_max = std::log(1e14) / p.gain_rate;
    QuadResult mass = integrate_adaptive(pdf, g_thresh, g_thresh + u_max, 1e-12);
    CHECK(mass.value == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("contention success probability") {
    CHECK(contention_success_prob(0.37, 1) == doctest::Approx(0.37));
    CHECK(contention_success_prob(0.5, 2) == doctest::Approx(0.5));
    CHECK_THROWS_AS(contention_success_prob(0.0, 3), std::domain_error);
    CHECK_THROWS_AS(contention_success_prob(1.0, 3), std::domain_error);

    for (int n = 1; n <= 10; ++n) {
        double best_p = 0.0, best_v = 0.0;
        for (int i = 1; i < 2000; ++i) {
            double p = i / 2000.0;
            double v = contention_success_prob(p, n);
            if (v > best_v) {
                best_v = v;
                best_p = p;
            }
        }
        CHECK(std::abs(best_p - 1.0 / n) <= 1.0 / 2000.0);
        if (n >= 2)
            CHECK(contention_success_prob(1.0 / n, n) ==
                  doctest::Approx(std::pow(1.0 - 1.0 / n, n - 1)));
    }
}

TEST_CASE("gain sampler statistics and determinism") {
    SystemParams p = defaults();
    EffectiveLink link = EffectiveLink::from(p);
    GainSampler a(7, p.gain_rate, link, p.bandwidth_hz);
    double sum = 0.0;
    const int n = 1000000;
    for (int i = 0; i < n; ++i) sum += a.sample_gain();
    CHECK(sum / n == doctest::Approx(1.0 / p.gain_rate).epsilon(0.01));

    double r = 2e6;
    double g_thresh = gain_threshold(r, link, p.bandwidth_hz);
    for (int i = 0; i < 1000; ++i) CHECK(a.sample_accepted_gain(r) >= g_thresh);

    GainSampler b(7, p.gain_rate, link, p.bandwidth_hz);
    GainSampler c(7, p.gain_rate, link, p.bandwidth_hz);
    for (int i = 0; i < 1000; ++i) CHECK(b.sample_gain() == c.sample_gain());
}

TEST_CASE("config file loading with dB conversions") {
    std::string path = "test_params_config.tmp";
    {
        std::ofstream out(path);
        out << "# test config\n"
            << "n_devices = 7\n"
            << "bandwidth_hz = 1e6\n"
            << "tx_power_w = 0.5\n"
            << "noise_psd_dbm_hz = -140\n"
            << "gain_rate = 1\n"
            << "slot_len_s = 0.001\n"
            << "data_nats = 1.5e4\n"
            << "distance_km = 0.5\n"
            << "carrier_mhz = 4800\n";
    }
    SystemParams p = SystemParams::load(path);
    CHECK(p.n_devices == 7);
    CHECK(p.tx_power_w == doctest::Approx(0.5));
    CHECK(p.noise_psd_w_hz == doctest::Approx(1e-17));
    std::remove(path.c_str());

    CHECK_THROWS_AS(SystemParams::load("no_such_file.cfg"), config_error);
    {
        std::ofstream out(path);
        out << "bogus_key = 1\n";
    }
    CHECK_THROWS_AS(SystemParams::load(path), config_error);
    std::remove(path.c_str());
}

TEST_CASE("parameter validation") {
    SystemParams p = defaults();
    p.n_devices = 0;
    CHECK_THROWS_AS(p.validate(), config_error);
    p = defaults();
    p.slot_len_s = -1.0;
    CHECK_THROWS_AS(p.validate(), config_error);
}
