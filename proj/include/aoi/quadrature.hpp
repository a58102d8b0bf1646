#ifndef AOI_QUADRATURE_HPP
#define AOI_QUADRATURE_HPP

#include <cstddef>
#include <functional>
#include <stdexcept>

namespace aoi {

struct QuadratureSpec {
    double rel_tol = 1e-9;
    double tail_cut = 1e-12;  ///< mass kept beyond the truncation point

    void validate() const {
        if (!(rel_tol > 0 && rel_tol <= 1e-3))
            throw std::domain_error("rel_tol outside (0, 1e-3]");
        if (!(tail_cut > 0 && tail_cut <= 1e-9))
            throw std::domain_error("tail_cut outside (0, 1e-9]");
    }
};

struct QuadResult {
    double value = 0.0;
    double error = 0.0;   ///< estimated absolute error
    bool converged = true;
    std::size_t evals = 0;
};

class quadrature_error : public std::runtime_error {
public:
    quadrature_error(const std::string& what, QuadResult partial)
        : std::runtime_error(what), partial_(partial) {}
    const QuadResult& partial() const { return partial_; }

private:
    QuadResult partial_;
};

/// Adaptive Gauss-Kronrod (7-15) on a finite interval. Splits the worst
/// subinterval until the summed error estimate is below rel_tol * |value|.
QuadResult integrate_adaptive(const std::function<double(double)>& f,
                              double lo, double hi, double rel_tol,
                              std::size_t max_intervals = 4000);

}  // namespace aoi

#endif
