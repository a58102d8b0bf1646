#ifndef AOI_MOMENTS_HPP
#define AOI_MOMENTS_HPP

#include <map>
#include <mutex>
#include <utility>

#include "aoi/channel.hpp"
#include "aoi/params.hpp"
#include "aoi/quadrature.hpp"

namespace aoi {

/// The five expectations entering the average-AoI ratio at one (p, r, n).
/// e_t and e_t2 are shared across n; only the P-moments see p and n.
struct MomentSet {
    double e_t;    ///< E{T_n}, s
    double e_t2;   ///< E{T_n^2}, s^2
    double e_p;    ///< E{P_n}, s
    double e_p2;   ///< E{P_n^2}, s^2
    int n;
};

/// Mean and second moment of a geometric({1,2,...}) law with success
/// probability theta: (1/theta, (2-theta)/theta^2).
std::pair<double, double> geometric_moments(double theta);

/// Evaluates the closed-form P-moments and the quadrature T-moments.
/// T-moments are memoized per r (exact-key); the cache is mutex-guarded so
/// concurrent readers are safe.
class MomentEvaluator {
public:
    MomentEvaluator(const SystemParams& params, QuadratureSpec quad = {});

    double expect_T(double r) const;
    double expect_T2(double r) const;
    double expect_P(double p, double r, int n) const;
    double expect_P2(double p, double r, int n) const;
    MomentSet moment_set(double p, double r, int n) const;

    /// Estimated absolute quadrature error of the T-moments at r.
    std::pair<double, double> t_moment_errors(double r) const;

    /// Solver bounds on r. r_min guards the small-r divergence of E{T};
    /// r_max is where q(r) falls to 1e-4 and contention time dominates.
    double r_min() const { return r_min_; }
    double r_max() const { return r_max_; }

    const SystemParams& params() const { return params_; }
    const EffectiveLink& link() const { return link_; }
    const QuadratureSpec& quad() const { return quad_; }

private:
    struct TMoments {
        double e_t, e_t2, err_t, err_t2;
    };
    const TMoments& t_moments(double r) const;
    TMoments compute_t_moments(double r) const;
    void check_r(double r) const;

    SystemParams params_;
    EffectiveLink link_;
    QuadratureSpec quad_;
    double r_min_;
    double r_max_;
    mutable std::mutex cache_mutex_;
    mutable std::map<double, TMoments> t_cache_;
};

}  // namespace aoi

#endif
