#ifndef AOI_DM_SOLVER_HPP
#define AOI_DM_SOLVER_HPP

#include <cstddef>
#include <ostream>
#include <utility>

#include "aoi/objective.hpp"

namespace aoi {

/// Result of an eps-global DM minimization with a certified gap:
/// f_star <= true minimum + gap.
struct DmSolution {
    double x_star = 0.0;
    double f_star = 0.0;
    double gap = 0.0;
    std::size_t evals = 0;
    bool converged = true;
};

/// eps-global minimization of f_inc - g_inc by monotone-bound branch and
/// reduce: the bracket [lo,hi] carries the valid lower bound
/// f_inc(lo) - g_inc(hi). In one dimension this is the polyblock outer
/// approximation with the vertex set collapsed to interval endpoints.
/// `trace`, when given, receives CSV rows (iteration, lo, hi, lower_bound,
/// incumbent).
DmSolution minimize_dm(const DmProblem& problem, double eps,
                       std::size_t max_evals = 200000,
                       std::ostream* trace = nullptr);

/// Minimizer of the unimodal product E{T}E{P} over r: bisection on the sign
/// of a centered finite difference. p enters the product only as a positive
/// factor, so the result is p-independent. `at_boundary` is set when no sign
/// change exists in [r_min, r_max] and an endpoint is returned.
double find_r_ddagger(const MomentEvaluator& mom, double p, double tol,
                      bool* at_boundary = nullptr);

/// Globally minimize F(xi, p, .) over r via the two DM pieces around
/// r_ddagger. Returns (r*, F*).
std::pair<double, double> minimize_over_r(const AoiObjective& obj, double xi,
                                          double p, double eps);

/// Globally minimize F(xi, ., r) over p via the N subinterval DM problems.
/// Returns (p*, F*); p* is strictly inside (0,1).
std::pair<double, double> minimize_over_p(const AoiObjective& obj, double xi,
                                          double r, double eps);

/// Edge clamp for open intervals: [lo + w, hi - w], w = 1e-9 (hi - lo).
std::pair<double, double> clamp_open(double lo, double hi);

}  // namespace aoi

#endif
