#ifndef AOI_PARAMS_HPP
#define AOI_PARAMS_HPP

#include <stdexcept>
#include <string>

namespace aoi {

/// All physical and protocol constants of the system. Linear SI units
/// throughout: watts, Hz, seconds, nats. dB/dBm values are converted on load.
struct SystemParams {
    int n_devices = 5;           ///< N, devices sharing the channel
    double bandwidth_hz = 1e6;   ///< B
    double tx_power_w = 1.0;     ///< p_T
    double noise_psd_w_hz = 1e-17;  ///< sigma^2, linear W/Hz (-140 dBm/Hz)
    double gain_rate = 1.0;      ///< lambda, rate of the exponential gain law (mean 1/lambda)
    double slot_len_s = 1e-3;    ///< delta, contention slot length
    double data_nats = 1.5e4;    ///< D, data per observation
    double distance_km = 0.5;    ///< link distance
    double carrier_mhz = 4800.0; ///< carrier frequency
    bool apply_path_loss = true; ///< attenuate tx power by free-space path loss

    void validate() const;

    /// Parse a flat key=value config file. Keys match field names; the
    /// suffixed variants noise_psd_dbm_hz and tx_power_dbm are accepted and
    /// converted to linear units. '#' starts a comment.
    static SystemParams load(const std::string& path);

    std::string to_config() const;
};

/// Free-space path loss in dB: 32.4 + 20 log10(d_km) + 20 log10(f_mhz).
double path_loss_db(double distance_km, double carrier_mhz);

/// Immutable derived link coefficient: the factor multiplying the channel
/// gain inside the rate's log, p_T_eff / (B sigma^2).
struct EffectiveLink {
    double snr_scale;

    static EffectiveLink from(const SystemParams& params);
};

class config_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace aoi

#endif
