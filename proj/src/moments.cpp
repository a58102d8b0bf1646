#include "aoi/moments.hpp"

#include <cmath>
#include <stdexcept>

namespace aoi {

std::pair<double, double> geometric_moments(double theta) {
    if (!(theta > 0.0 && theta <= 1.0))
        throw std::domain_error("geometric_moments: theta outside (0,1]");
    return {1.0 / theta, (2.0 - theta) / (theta * theta)};
}

MomentEvaluator::MomentEvaluator(const SystemParams& params, QuadratureSpec quad)
    : params_(params), link_(EffectiveLink::from(params)), quad_(quad) {
    quad_.validate();
    r_min_ = 1e-3 * params_.bandwidth_hz * std::log(2.0);
    // q(r_max) = 1e-4: beyond this contention time dominates the objective
    double g_max = std::log(1e4) / params_.gain_rate;
    r_max_ = rate_of_gain(g_max, link_, params_.bandwidth_hz);
}

void MomentEvaluator::check_r(double r) const {
    if (!(r > 0)) throw std::domain_error("moment evaluation: r must be > 0");
}

MomentEvaluator::TMoments MomentEvaluator::compute_t_moments(double r) const {
    // Substituting u = g - G(r) cancels the e^{-lambda G}/q(r) factor:
    // E{T^k} = int_0^inf (D / (B ln(1 + s (G + u))))^k lambda e^{-lambda u} du.
    const double g_thresh = gain_threshold(r, link_, params_.bandwidth_hz);
    const double lambda = params_.gain_rate;
    const double s = link_.snr_scale;
    const double b = params_.bandwidth_hz;
    const double d = params_.data_nats;
    const double u_max = std::log(1.0 / quad_.tail_cut) / lambda;

    auto integrand1 = [&](double u) {
        double t = d / (b * std::log1p(s * (g_thresh + u)));
        return t * lambda * std::exp(-lambda * u);
    };
    auto integrand2 = [&](double u) {
        double t = d / (b * std::log1p(s * (g_thresh + u)));
        return t * t * lambda * std::exp(-lambda * u);
    };
    QuadResult q1 = integrate_adaptive(integrand1, 0.0, u_max, quad_.rel_tol);
    QuadResult q2 = integrate_adaptive(integrand2, 0.0, u_max, quad_.rel_tol);
    return {q1.value, q2.value, q1.error, q2.error};
}

const MomentEvaluator::TMoments& MomentEvaluator::t_moments(double r) const {
    check_r(r);
    {
        std::lock_guard<std::mutex> lock(cache_mutex_);
        auto it = t_cache_.find(r);
        if (it != t_cache_.end()) return it->second;
    }
    TMoments m = compute_t_moments(r);
    std::lock_guard<std::mutex> lock(cache_mutex_);
    return t_cache_.emplace(r, m).first->second;
}

double MomentEvaluator::expect_T(double r) const { return t_moments(r).e_t; }

double MomentEvaluator::expect_T2(double r) const { return t_moments(r).e_t2; }

std::pair<double, double> MomentEvaluator::t_moment_errors(double r) const {
    const TMoments& m = t_moments(r);
    return {m.err_t, m.err_t2};
}

double MomentEvaluator::expect_P(double p, double r, int n) const {
    check_r(r);
    if (n < 1 || n > params_.n_devices)
        throw std::domain_error("expect_P: n outside [1, N]");
    double pn = contention_success_prob(p, n);
    double q = accept_prob(r, params_.gain_rate, link_, params_.bandwidth_hz);
    return params_.slot_len_s / (pn * q);
}

double MomentEvaluator::expect_P2(double p, double r, int n) const {
    check_r(r);
    if (n < 1 || n > params_.n_devices)
        throw std::domain_error("expect_P2: n outside [1, N]");
    double pn = contention_success_prob(p, n);
    double q = accept_prob(r, params_.gain_rate, link_, params_.bandwidth_hz);
    double d2 = params_.slot_len_s * params_.slot_len_s;
    return ((2.0 - q) / (pn * pn * q * q) + (1.0 - pn) / (q * pn * pn)) * d2;
}

MomentSet MomentEvaluator::moment_set(double p, double r, int n) const {
    const TMoments& t = t_moments(r);
    return {t.e_t, t.e_t2, expect_P(p, r, n), expect_P2(p, r, n), n};
}

}  // namespace aoi
