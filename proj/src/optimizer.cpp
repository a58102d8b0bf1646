#include "aoi/optimizer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <json.hpp>

namespace aoi {

void SolverConfig::validate() const {
    if (!(dinkelbach_tol > 0) || !(bcd_tol > 0) || !(dm_eps_rel > 0))
        throw std::domain_error("SolverConfig: tolerances must be > 0");
    if (max_outer < 1 || max_inner < 1 || multistarts < 1)
        throw std::domain_error("SolverConfig: iteration counts must be >= 1");
}

BcdResult bcd_solve(const AoiObjective& obj, double xi, double p0, double r0,
                    const SolverConfig& cfg) {
    cfg.validate();
    double p = p0;
    double r = r0;
    double f_cur = obj.dinkelbach_F(xi, p, r);
    BcdResult res;
    res.trace.push_back(f_cur);
    res.converged = false;

    for (int it = 0; it < cfg.max_inner; ++it) {
        double eps = cfg.dm_eps_rel * (std::abs(f_cur) + 1.0);
        // p first, then r, each an eps-global coordinate minimization
        p = minimize_over_p(obj, xi, r, eps).first;
        r = minimize_over_r(obj, xi, p, eps).first;
        double f_next = obj.dinkelbach_F(xi, p, r);
        if (f_next > f_cur + 10.0 * eps)
            throw std::logic_error("bcd_solve: descent violated");
        res.trace.push_back(f_next);
        if (f_cur - f_next < cfg.bcd_tol * (std::abs(f_next) + 1.0)) {
            res.converged = true;
            f_cur = std::min(f_cur, f_next);
            break;
        }
        f_cur = f_next;
    }
    res.p = p;
    res.r = r;
    res.objective = obj.dinkelbach_F(xi, p, r);
    return res;
}

OptimizerReport dinkelbach_solve(const AoiObjective& obj,
                                 const SolverConfig& cfg) {
    cfg.validate();
    auto t0 = std::chrono::steady_clock::now();
    const SystemParams& prm = obj.moments().params();
    double p = cfg.p0 > 0 ? cfg.p0 : 1.0 / prm.n_devices;
    double r = cfg.r0 > 0 ? cfg.r0 : prm.bandwidth_hz * std::log(2.0);

    OptimizerReport rep;
    double xi = obj.average_aoi(p, r).delta_bar;
    rep.xi_trace.push_back(xi);

    for (int outer = 0; outer < cfg.max_outer; ++outer) {
        BcdResult inner = bcd_solve(obj, xi, p, r, cfg);
        rep.bcd_traces.push_back(inner.trace);
        p = inner.p;
        r = inner.r;
        AoiPoint pt = obj.average_aoi(p, r);
        double gamma = inner.objective;  // F(xi, p*, r*) = Gamma-hat(xi)
        xi = pt.delta_bar;
        rep.xi_trace.push_back(xi);
        if (std::abs(gamma) <= cfg.dinkelbach_tol * pt.denominator) {
            rep.converged = true;
            break;
        }
    }
    rep.p_star = p;
    rep.r_star = r;
    rep.delta_star = xi;
    rep.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    return rep;
}

OptimizerReport optimize(const AoiObjective& obj, const SolverConfig& cfg) {
    cfg.validate();
    const int n_dev = obj.moments().params().n_devices;
    const double inv_n = 1.0 / n_dev;
    const double starts[5] = {inv_n, 0.5 * inv_n, std::min(2.0 * inv_n, 0.9),
                              0.3, 0.7};
    int n_starts = std::min(cfg.multistarts, 5);

    OptimizerReport best;
    double best_delta = std::numeric_limits<double>::infinity();
    double worst_delta = 0.0;
    for (int i = 0; i < n_starts; ++i) {
        SolverConfig c = cfg;
        c.p0 = starts[i];
        OptimizerReport rep = dinkelbach_solve(obj, c);
        worst_delta = std::max(worst_delta, rep.delta_star);
        if (rep.delta_star < best_delta) {
            best_delta = rep.delta_star;
            best = rep;
        }
    }
    best.multistart_spread = (worst_delta - best_delta) / best_delta;
    return best;
}

std::pair<double, double> optimize_r_at_fixed_p(const AoiObjective& obj,
                                                double p,
                                                const SolverConfig& cfg) {
    cfg.validate();
    const SystemParams& prm = obj.moments().params();
    double r = cfg.r0 > 0 ? cfg.r0 : prm.bandwidth_hz * std::log(2.0);
    double xi = obj.average_aoi(p, r).delta_bar;
    for (int outer = 0; outer < cfg.max_outer; ++outer) {
        double eps = cfg.dm_eps_rel * (std::abs(xi) + 1.0);
        auto [r_new, gamma] = minimize_over_r(obj, xi, p, eps);
        r = r_new;
        AoiPoint pt = obj.average_aoi(p, r);
        xi = pt.delta_bar;
        if (std::abs(gamma) <= cfg.dinkelbach_tol * pt.denominator) break;
    }
    return {r, xi};
}

GridSearchResult grid_search_oracle(const AoiObjective& obj, int grid_p,
                                    int grid_r) {
    if (grid_p < 2 || grid_r < 2)
        throw std::domain_error("grid_search_oracle: grids must be >= 2");
    const MomentEvaluator& mom = obj.moments();
    auto [p_lo, p_hi] = clamp_open(0.0, 1.0);
    double log_lo = std::log(mom.r_min());
    double log_hi = std::log(mom.r_max());

    GridSearchResult best{0.0, 0.0, std::numeric_limits<double>::infinity()};
    for (int j = 0; j < grid_r; ++j) {
        double r = std::exp(log_lo + (log_hi - log_lo) * j / (grid_r - 1));
        for (int i = 0; i < grid_p; ++i) {
            double p = p_lo + (p_hi - p_lo) * i / (grid_p - 1);
            double delta = obj.average_aoi(p, r).delta_bar;
            if (delta < best.delta_hat) best = {p, r, delta};
        }
    }
    return best;
}

std::string OptimizerReport::to_json() const {
    // wall time deliberately left out: serialized reports must be
    // byte-identical across reruns with the same config and seed
    nlohmann::json j;
    j["p_star"] = p_star;
    j["r_star"] = r_star;
    j["delta_star_s"] = delta_star;
    j["xi_trace"] = xi_trace;
    j["bcd_traces"] = bcd_traces;
    j["converged"] = converged;
    j["multistart_spread"] = multistart_spread;
    return j.dump(2);
}

}  // namespace aoi
