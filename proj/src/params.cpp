#include "aoi/params.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace aoi {

void SystemParams::validate() const {
    if (n_devices < 1) throw config_error("n_devices must be >= 1");
    if (!(bandwidth_hz > 0)) throw config_error("bandwidth_hz must be > 0");
    if (!(tx_power_w > 0)) throw config_error("tx_power_w must be > 0");
    if (!(noise_psd_w_hz > 0)) throw config_error("noise_psd_w_hz must be > 0");
    if (!(gain_rate > 0)) throw config_error("gain_rate must be > 0");
    if (!(slot_len_s > 0)) throw config_error("slot_len_s must be > 0");
    if (!(data_nats > 0)) throw config_error("data_nats must be > 0");
    if (!(distance_km > 0)) throw config_error("distance_km must be > 0");
    if (!(carrier_mhz > 0)) throw config_error("carrier_mhz must be > 0");
}

double path_loss_db(double distance_km, double carrier_mhz) {
    if (!(distance_km > 0) || !(carrier_mhz > 0))
        throw std::domain_error("path_loss_db: non-positive argument");
    return 32.4 + 20.0 * std::log10(distance_km) + 20.0 * std::log10(carrier_mhz);
}

EffectiveLink EffectiveLink::from(const SystemParams& params) {
    params.validate();
    double p_eff = params.tx_power_w;
    if (params.apply_path_loss) {
        double lf = path_loss_db(params.distance_km, params.carrier_mhz);
        p_eff /= std::pow(10.0, lf / 10.0);
    }
    return EffectiveLink{p_eff / (params.bandwidth_hz * params.noise_psd_w_hz)};
}

namespace {

double parse_double(const std::string& key, const std::string& value) {
    std::size_t pos = 0;
    double v;
    try {
        v = std::stod(value, &pos);
    } catch (const std::exception&) {
        throw config_error("bad numeric value for " + key + ": " + value);
    }
    if (pos != value.size())
        throw config_error("trailing characters in value for " + key);
    return v;
}

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? "" : s.substr(b, e - b + 1);
}

}  // namespace

SystemParams SystemParams::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open config file: " + path);
    SystemParams p;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw config_error(path + ":" + std::to_string(lineno) +
                               ": expected key=value");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));

        if (key == "n_devices") {
            p.n_devices = static_cast<int>(parse_double(key, value));
        } else if (key == "bandwidth_hz") {
            p.bandwidth_hz = parse_double(key, value);
        } else if (key == "tx_power_w") {
            p.tx_power_w = parse_double(key, value);
        } else if (key == "tx_power_dbm") {
            p.tx_power_w = std::pow(10.0, (parse_double(key, value) - 30.0) / 10.0);
        } else if (key == "noise_psd_w_hz") {
            p.noise_psd_w_hz = parse_double(key, value);
        } else if (key == "noise_psd_dbm_hz") {
            p.noise_psd_w_hz =
                std::pow(10.0, (parse_double(key, value) - 30.0) / 10.0);
        } else if (key == "gain_rate") {
            p.gain_rate = parse_double(key, value);
        } else if (key == "slot_len_s") {
            p.slot_len_s = parse_double(key, value);
        } else if (key == "data_nats") {
            p.data_nats = parse_double(key, value);
        } else if (key == "distance_km") {
            p.distance_km = parse_double(key, value);
        } else if (key == "carrier_mhz") {
            p.carrier_mhz = parse_double(key, value);
        } else if (key == "apply_path_loss") {
            p.apply_path_loss = parse_double(key, value) != 0.0;
        } else {
            throw config_error("unknown config key: " + key);
        }
    }
    p.validate();
    return p;
}

std::string SystemParams::to_config() const {
    std::ostringstream out;
    out.precision(17);
    out << "n_devices = " << n_devices << "\n"
        << "bandwidth_hz = " << bandwidth_hz << "\n"
        << "tx_power_w = " << tx_power_w << "\n"
        << "noise_psd_w_hz = " << noise_psd_w_hz << "\n"
        << "gain_rate = " << gain_rate << "\n"
        << "slot_len_s = " << slot_len_s << "\n"
        << "data_nats = " << data_nats << "\n"
        << "distance_km = " << distance_km << "\n"
        << "carrier_mhz = " << carrier_mhz << "\n"
        << "apply_path_loss = " << (apply_path_loss ? 1 : 0) << "\n";
    return out.str();
}

}  // namespace aoi
