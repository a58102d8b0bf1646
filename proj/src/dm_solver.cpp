#include "aoi/dm_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <vector>

namespace aoi {

std::pair<double, double> clamp_open(double lo, double hi) {
    double w = 1e-9 * (hi - lo);
    return {lo + w, hi - w};
}

namespace {

struct Bracket {
    double lo, hi;
    double f_lo, g_lo, f_hi, g_hi;
    double lb;  // f_inc(lo) - g_inc(hi), valid lower bound on [lo, hi]
};

struct LbOrder {
    bool operator()(const Bracket& a, const Bracket& b) const {
        return a.lb > b.lb;
    }
};

}  // namespace

DmSolution minimize_dm(const DmProblem& problem, double eps,
                       std::size_t max_evals, std::ostream* trace) {
    DmSolution sol;
    const auto& f = problem.f_inc;
    const auto& g = problem.g_inc;

    Bracket root;
    root.lo = problem.lo;
    root.hi = problem.hi;
    root.f_lo = f(root.lo);
    root.g_lo = g(root.lo);
    root.f_hi = f(root.hi);
    root.g_hi = g(root.hi);
    root.lb = root.f_lo - root.g_hi;
    sol.evals = 4;

    double incumbent = root.f_lo - root.g_lo;
    double x_best = root.lo;
    double obj_hi = root.f_hi - root.g_hi;
    if (obj_hi < incumbent) {
        incumbent = obj_hi;
        x_best = root.hi;
    }

    std::priority_queue<Bracket, std::vector<Bracket>, LbOrder> queue;
    queue.push(root);
    // lower bounds of brackets retired because they could not be split further
    double retired_lb = std::numeric_limits<double>::infinity();
    std::size_t iteration = 0;

    while (!queue.empty()) {
        Bracket cur = queue.top();
        if (trace)
            *trace << iteration << ',' << cur.lo << ',' << cur.hi << ','
                   << cur.lb << ',' << incumbent << '\n';
        ++iteration;
        if (cur.lb >= incumbent - eps) break;  // certificate reached
        if (sol.evals + 2 > max_evals) {
            sol.converged = false;
            break;
        }
        queue.pop();

        double mid = 0.5 * (cur.lo + cur.hi);
        if (!(mid > cur.lo && mid < cur.hi)) {
            retired_lb = std::min(retired_lb, cur.lb);
            continue;
        }
        double f_mid = f(mid);
        double g_mid = g(mid);
        sol.evals += 2;
        double obj_mid = f_mid - g_mid;
        if (obj_mid < incumbent) {
            incumbent = obj_mid;
            x_best = mid;
        }

        Bracket left{cur.lo, mid, cur.f_lo, cur.g_lo, f_mid, g_mid,
                     cur.f_lo - g_mid};
        Bracket right{mid, cur.hi, f_mid, g_mid, cur.f_hi, cur.g_hi,
                      f_mid - cur.g_hi};
        if (left.lb < incumbent - eps) queue.push(left);
        if (right.lb < incumbent - eps) queue.push(right);
    }

    double best_lb = retired_lb;
    if (!queue.empty()) best_lb = std::min(best_lb, queue.top().lb);
    sol.x_star = x_best;
    sol.f_star = incumbent;
    sol.gap = std::isfinite(best_lb) ? std::max(0.0, incumbent - best_lb) : 0.0;
    return sol;
}

namespace {

// E{T}E{P} up to the positive factor delta/p_n(p); its minimizer in r is
// r_ddagger, the split point between the two DM pieces.
double t_p_product(const MomentEvaluator& mom, double p, double r) {
    return mom.expect_T(r) * mom.expect_P(p, r, 1);
}

// Sign of the centered finite difference, 0 when the difference is buried in
// quadrature noise.
int product_slope_sign(const MomentEvaluator& mom, double p, double r,
                       double lo, double hi) {
    double h = std::max(1e-4 * r, 1e-3);
    double r_lo = std::max(r - h, lo);
    double r_hi = std::min(r + h, hi);
    double v_lo = t_p_product(mom, p, r_lo);
    double v_hi = t_p_product(mom, p, r_hi);
    double noise =
        10.0 * (mom.t_moment_errors(r_lo).first * mom.expect_P(p, r_lo, 1) +
                mom.t_moment_errors(r_hi).first * mom.expect_P(p, r_hi, 1));
    double diff = v_hi - v_lo;
    if (std::abs(diff) <= noise) return 0;
    return diff > 0 ? 1 : -1;
}

}  // namespace

double find_r_ddagger(const MomentEvaluator& mom, double p, double tol,
                      bool* at_boundary) {
    if (!(tol > 0)) throw std::domain_error("find_r_ddagger: tol must be > 0");
    double lo = mom.r_min();
    double hi = mom.r_max();
    if (at_boundary) *at_boundary = false;

    int sign_lo = product_slope_sign(mom, p, lo, lo, hi);
    int sign_hi = product_slope_sign(mom, p, hi, lo, hi);
    if (sign_lo >= 0) {
        // product already increasing at the left end: minimum at r_min
        if (at_boundary) *at_boundary = true;
        return lo;
    }
    if (sign_hi <= 0) {
        if (at_boundary) *at_boundary = true;
        return hi;
    }

    while (hi - lo > tol) {
        double mid = 0.5 * (lo + hi);
        int s = product_slope_sign(mom, p, mid, mom.r_min(), mom.r_max());
        if (s < 0) {
            lo = mid;
        } else if (s > 0) {
            hi = mid;
        } else {
            // ambiguous slope means we are near the flat minimum: shrink
            // symmetrically around the midpoint
            lo = 0.5 * (lo + mid);
            hi = 0.5 * (hi + mid);
        }
    }
    return 0.5 * (lo + hi);
}

std::pair<double, double> minimize_over_r(const AoiObjective& obj, double xi,
                                          double p, double eps) {
    const MomentEvaluator& mom = obj.moments();
    double r_tol = 1e-6 * mom.params().bandwidth_hz * std::log(2.0);
    double r_ddagger = find_r_ddagger(mom, p, r_tol);

    auto [low, high] = obj.dm_split_r(xi, p, r_ddagger);
    auto [lo1, hi1] = clamp_open(low.lo, low.hi);
    low.lo = lo1;
    low.hi = hi1;
    auto [lo2, hi2] = clamp_open(high.lo, high.hi);
    high.lo = lo2;
    high.hi = hi2;

    DmSolution s1 = minimize_dm(low, eps);
    DmSolution s2 = minimize_dm(high, eps);
    return s1.f_star <= s2.f_star ? std::make_pair(s1.x_star, s1.f_star)
                                  : std::make_pair(s2.x_star, s2.f_star);
}

std::pair<double, double> minimize_over_p(const AoiObjective& obj, double xi,
                                          double r, double eps) {
    const int n_dev = obj.n_devices();
    double best_p = 0.0;
    double best_f = std::numeric_limits<double>::infinity();
    for (int sub = 1; sub <= n_dev; ++sub) {
        DmProblem dm = obj.dm_split_p(xi, r, sub);
        auto [lo, hi] = clamp_open(dm.lo, dm.hi);
        dm.lo = lo;
        dm.hi = hi;
        DmSolution s = minimize_dm(dm, eps);
        if (s.f_star < best_f) {
            best_f = s.f_star;
            best_p = s.x_star;
        }
    }
    return {best_p, best_f};
}

}  // namespace aoi
