#include "aoi/objective.hpp"

#include <array>
#include <cmath>
#include <sstream>

namespace aoi {

void audit_dm(const DmProblem& dm, int grid_points, double slack) {
    auto check = [&](const std::function<double(double)>& fn, const char* name) {
        double prev = fn(dm.lo);
        for (int i = 1; i < grid_points; ++i) {
            double x = dm.lo + (dm.hi - dm.lo) * i / (grid_points - 1);
            double cur = fn(x);
            if (cur < prev - slack) {
                std::ostringstream msg;
                msg << "DM component " << name << " decreases at x=" << x
                    << " (" << prev << " -> " << cur << ")";
                throw monotonicity_error(msg.str());
            }
            prev = cur;
        }
    };
    check(dm.f_inc, "f_inc");
    check(dm.g_inc, "g_inc");
}

AoiPoint AoiObjective::average_aoi(double p, double r) const {
    const int n_dev = n_devices();
    double e_t = mom_.expect_T(r);
    double e_t2 = mom_.expect_T2(r);
    double num = 0.0, den = 0.0;
    for (int n = 1; n <= n_dev; ++n) {
        double e_p = mom_.expect_P(p, r, n);
        double e_p2 = mom_.expect_P2(p, r, n);
        num += 2.0 * e_t * e_p + e_t * e_t + 0.5 * e_p2 + 0.5 * e_t2;
        den += e_t + e_p;
    }
    return {p, r, num / den, num, den};
}

double AoiObjective::dinkelbach_F(double xi, double p, double r) const {
    AoiPoint pt = average_aoi(p, r);
    return pt.numerator - xi * pt.denominator;
}

DeviceCoeffs AoiObjective::device_coeffs(double xi, double r) const {
    const SystemParams& prm = mom_.params();
    double delta = prm.slot_len_s;
    double q = accept_prob(r, prm.gain_rate, mom_.link(), prm.bandwidth_hz);
    double e_t = mom_.expect_T(r);
    double e_t2 = mom_.expect_T2(r);
    DeviceCoeffs c;
    c.a = delta * delta / (q * q);
    c.b = 2.0 * delta * e_t / q;
    c.c = -delta * delta / (2.0 * q) - xi * delta / q;
    c.d = 0.5 * e_t2 + e_t * e_t - xi * e_t;
    return c;
}

double AoiObjective::f_n1(const DeviceCoeffs& c, double pn) const {
    return c.a / (pn * pn) + c.b / pn;
}

double AoiObjective::f_n2(const DeviceCoeffs& c, double pn) const {
    return c.c / pn + c.d;
}

double AoiObjective::per_device_F(double xi, double p, double r, int n) const {
    DeviceCoeffs c = device_coeffs(xi, r);
    double pn = contention_success_prob(p, n);
    return f_n1(c, pn) + f_n2(c, pn);
}

std::pair<DmProblem, DmProblem> AoiObjective::dm_split_r(double xi, double p,
                                                         double r_ddagger) const {
    const int n_dev = n_devices();
    auto sums = [this, xi, p, n_dev](double r) {
        // returns (sum 1/2 E{P^2}, sum E{P}, sum 2 E{T}E{P}) plus T-terms
        double e_t = mom_.expect_T(r);
        double e_t2 = mom_.expect_T2(r);
        double half_p2 = 0.0, sum_p = 0.0, cross = 0.0;
        for (int n = 1; n <= n_dev; ++n) {
            double e_p = mom_.expect_P(p, r, n);
            half_p2 += 0.5 * mom_.expect_P2(p, r, n);
            sum_p += e_p;
            cross += 2.0 * e_t * e_p;
        }
        double t_terms = n_dev * (e_t * e_t + 0.5 * e_t2);
        double xi_t = xi * n_dev * e_t;
        return std::array<double, 5>{half_p2, sum_p, cross, t_terms, xi_t};
    };

    DmProblem low;
    low.lo = mom_.r_min();
    low.hi = r_ddagger;
    low.f_inc = [sums](double r) {
        auto s = sums(r);
        return s[0] - s[4];
    };
    low.g_inc = [sums, xi](double r) {
        auto s = sums(r);
        return -(s[2] + s[3] - xi * s[1]);
    };

    DmProblem high;
    high.lo = r_ddagger;
    high.hi = mom_.r_max();
    high.f_inc = [sums](double r) {
        auto s = sums(r);
        return s[0] - s[4] + s[2];
    };
    high.g_inc = [sums, xi](double r) {
        auto s = sums(r);
        return -(s[3] - xi * s[1]);
    };

    // A sign error in the grouping silently loses global optimality, so the
    // monotone directions are always audited before solving. The slack
    // absorbs quadrature noise in the T-moments.
    double slack = 1e-7 * (std::abs(low.f_inc(low.lo)) + 1.0);
    audit_dm(low, 50, slack);
    audit_dm(high, 50, slack);
    return {low, high};
}

std::pair<double, double> AoiObjective::p_subinterval(int sub) const {
    const int n_dev = n_devices();
    if (sub < 1 || sub > n_dev)
        throw std::domain_error("p_subinterval: index outside [1, N]");
    if (sub == 1) return {0.0, 1.0 / n_dev};
    // sub = n'' in {2..N}: [1/n'', 1/(n''-1))
    return {1.0 / sub, 1.0 / (sub - 1)};
}

DmProblem AoiObjective::dm_split_p(double xi, double r, int sub) const {
    const int n_dev = n_devices();
    auto [lo, hi] = p_subinterval(sub);
    DeviceCoeffs coeffs = device_coeffs(xi, r);

    // Devices n >= n'' have p >= 1/n on this subinterval, so p_n(p) is
    // decreasing there and the roles of F_{n,1}/F_{n,2} swap.
    int n_split = (sub == 1) ? n_dev + 1 : sub;
    DmProblem dm;
    dm.lo = lo;
    dm.hi = hi;
    dm.f_inc = [this, coeffs, n_split, n_dev](double p) {
        double v = 0.0;
        for (int n = 1; n <= n_dev; ++n) {
            double pn = contention_success_prob(p, n);
            v += (n < n_split) ? f_n2(coeffs, pn) : f_n1(coeffs, pn);
        }
        return v;
    };
    dm.g_inc = [this, coeffs, n_split, n_dev](double p) {
        double v = 0.0;
        for (int n = 1; n <= n_dev; ++n) {
            double pn = contention_success_prob(p, n);
            v += (n < n_split) ? f_n1(coeffs, pn) : f_n2(coeffs, pn);
        }
        return -v;
    };

    // audit on the clamped interval; the components diverge at p -> 0
    double w = 1e-9 * (hi - lo);
    DmProblem audited = dm;
    audited.lo = lo + w;
    audited.hi = hi - w;
    audit_dm(audited, 50, 1e-9 * (std::abs(dm.f_inc(audited.lo)) + 1.0));
    return dm;
}

}  // namespace aoi
