#ifndef AOI_OPTIMIZER_HPP
#define AOI_OPTIMIZER_HPP

#include <string>
#include <vector>

#include "aoi/dm_solver.hpp"
#include "aoi/objective.hpp"

namespace aoi {

struct SolverConfig {
    double dinkelbach_tol = 1e-7;  ///< relative Gamma criterion, scaled by denominator
    double bcd_tol = 1e-8;         ///< relative objective decrease per sweep
    int max_outer = 50;
    int max_inner = 100;
    double dm_eps_rel = 1e-6;      ///< DM gap, scaled by |incumbent| + 1
    double p0 = -1.0;              ///< start; < 0 means 1/N
    double r0 = -1.0;              ///< start; < 0 means B ln 2
    int multistarts = 5;

    void validate() const;
};

struct BcdResult {
    double p;
    double r;
    double objective;  ///< F(xi, p, r) at the fixed point
    std::vector<double> trace;
    bool converged;
};

struct OptimizerReport {
    double p_star = 0.0;
    double r_star = 0.0;
    double delta_star = 0.0;  ///< s, the final xi
    std::vector<double> xi_trace;
    std::vector<std::vector<double>> bcd_traces;  ///< per-xi inner objective values
    bool converged = false;
    double wall_time_s = 0.0;
    double multistart_spread = 0.0;  ///< relative spread of multistart delta values

    std::string to_json() const;
};

/// Inner BCD loop at fixed xi: alternate exact minimization over p then r
/// until the per-sweep decrease falls below bcd_tol (|F| + 1).
BcdResult bcd_solve(const AoiObjective& obj, double xi, double p0, double r0,
                    const SolverConfig& cfg);

/// Outer Dinkelbach iteration: xi_{i+1} = delta_bar(p*(xi_i), r*(xi_i)) until
/// |Gamma(xi)| <= dinkelbach_tol * denominator. Warm start xi_0 =
/// delta_bar(p0, r0) makes the xi trace decreasing.
OptimizerReport dinkelbach_solve(const AoiObjective& obj,
                                 const SolverConfig& cfg);

/// Dinkelbach + multistart BCD from cfg.multistarts deterministic starts;
/// returns the best report with the spread recorded.
OptimizerReport optimize(const AoiObjective& obj, const SolverConfig& cfg);

/// Reduced single-variable solve: optimal r (and resulting delta_bar) at a
/// fixed contention probability p, via Dinkelbach over r alone.
std::pair<double, double> optimize_r_at_fixed_p(const AoiObjective& obj,
                                                double p,
                                                const SolverConfig& cfg);

struct GridSearchResult {
    double p_hat;
    double r_hat;
    double delta_hat;
};

/// Exhaustive average_aoi evaluation on a grid_p x grid_r Cartesian grid,
/// p uniform on the clamped (0,1), r log-spaced on [r_min, r_max].
GridSearchResult grid_search_oracle(const AoiObjective& obj, int grid_p,
                                    int grid_r);

}  // namespace aoi

#endif
