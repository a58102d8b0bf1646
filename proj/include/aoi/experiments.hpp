#ifndef AOI_EXPERIMENTS_HPP
#define AOI_EXPERIMENTS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "aoi/optimizer.hpp"
#include "aoi/params.hpp"

namespace aoi {

struct ExperimentSpec {
    SystemParams params;
    std::string out_dir = ".";
    std::uint64_t seed = 1;
    bool strict = false;          ///< trend assertion failures become fatal
    std::vector<double> pt_sweep_w = {0.1, 0.2, 0.5, 1.0, 2.0};
    std::vector<int> n_list = {3, 4, 5, 6, 7};
    int p_grid = 200;
    std::uint64_t cycles = 100000;
    SolverConfig solver;
};

struct ExperimentResult {
    bool ok = true;
    std::vector<std::string> failures;
};

/// Minimum average AoI versus transmit power, one curve per N. Emits
/// fig3.csv and fig3.svg and checks the monotone trends (AoI nonincreasing
/// in p_T per curve, nondecreasing in N per column).
ExperimentResult run_fig3(const ExperimentSpec& spec);

/// Average AoI versus p with r optimized per point, one curve per N, with
/// the full optimizer's (p*, delta*) overlaid. Emits fig4.csv, fig4_opt.csv
/// and fig4.svg and checks the marker sits on each curve's minimum.
ExperimentResult run_fig4(const ExperimentSpec& spec);

/// Cross-module oracle suite: analytic moments and average AoI against the
/// simulator, solver against grid search. Emits validate.json.
ExperimentResult run_validate(const ExperimentSpec& spec);

/// Plain polyline SVG, a pure function of the series passed in.
struct PlotSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
    bool markers_only = false;
};
std::string render_svg(const std::vector<PlotSeries>& series,
                       const std::string& x_label, const std::string& y_label,
                       bool log_y = false);

}  // namespace aoi

#endif
