#ifndef AOI_OBJECTIVE_HPP
#define AOI_OBJECTIVE_HPP

#include <functional>
#include <utility>

#include "aoi/moments.hpp"

namespace aoi {

/// One evaluation of the average-AoI ratio.
struct AoiPoint {
    double p;
    double r;
    double delta_bar;    ///< numerator / denominator, s
    double numerator;    ///< E{Q}, s^2
    double denominator;  ///< E{C}, s
};

/// A 1-D difference-of-monotone instance: minimize f_inc(x) - g_inc(x) on
/// [lo, hi], both components nondecreasing.
struct DmProblem {
    std::function<double(double)> f_inc;
    std::function<double(double)> g_inc;
    double lo;
    double hi;

    double objective(double x) const { return f_inc(x) - g_inc(x); }
};

class monotonicity_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Checks both components of a DmProblem are nondecreasing on a coarse grid.
/// `slack` absorbs quadrature noise. Throws monotonicity_error on failure.
void audit_dm(const DmProblem& dm, int grid_points = 50, double slack = 0.0);

/// Per-device coefficients of F_n = A/p_n^2 + (B+C)/p_n + D. They depend on
/// (xi, r) only; the device index enters through p_n(p) alone.
struct DeviceCoeffs {
    double a;  ///< delta^2 / q^2
    double b;  ///< 2 delta E{T} / q
    double c;  ///< -delta^2/(2q) - xi delta/q
    double d;  ///< E{T^2}/2 + E{T}^2 - xi E{T}
};

/// Average-AoI ratio, its Dinkelbach surrogate, and the two
/// difference-of-monotone regroupings used by the solver.
class AoiObjective {
public:
    explicit AoiObjective(const MomentEvaluator& moments) : mom_(moments) {}

    AoiPoint average_aoi(double p, double r) const;

    /// F(xi,p,r) = numerator(p,r) - xi * denominator(p,r).
    double dinkelbach_F(double xi, double p, double r) const;

    DeviceCoeffs device_coeffs(double xi, double r) const;

    /// Value of the n-th device's share of F; sums over n to dinkelbach_F.
    double per_device_F(double xi, double p, double r, int n) const;

    /// F_{n,1} = A/p_n^2 + B/p_n (decreasing in p_n) and
    /// F_{n,2} = C/p_n + D (increasing in p_n when C < 0).
    double f_n1(const DeviceCoeffs& c, double pn) const;
    double f_n2(const DeviceCoeffs& c, double pn) const;

    /// The two monotone regroupings of F in r, split at r_ddagger. Each piece
    /// is audited for monotone direction before being returned.
    std::pair<DmProblem, DmProblem> dm_split_r(double xi, double p,
                                               double r_ddagger) const;

    /// Monotone regrouping of F in p on the sub-th subinterval of (0,1):
    /// sub = 1 is (0, 1/N); sub = n'' in {2..N} is [1/n'', 1/(n''-1)).
    DmProblem dm_split_p(double xi, double r, int sub) const;

    /// Subinterval endpoints for dm_split_p.
    std::pair<double, double> p_subinterval(int sub) const;

    const MomentEvaluator& moments() const { return mom_; }
    int n_devices() const { return mom_.params().n_devices; }

private:
    const MomentEvaluator& mom_;
};

}  // namespace aoi

#endif
