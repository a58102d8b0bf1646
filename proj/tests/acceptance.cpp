// End-to-end acceptance suite. Each criterion prints exactly one line,
// "criterion N (<name>): PASS|FAIL", and the process exits nonzero if any
// criterion fails. Runtimes are printed to stderr so the budget per
// criterion is visible.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "aoi/channel.hpp"
#include "aoi/dm_solver.hpp"
#include "aoi/experiments.hpp"
#include "aoi/moments.hpp"
#include "aoi/objective.hpp"
#include "aoi/optimizer.hpp"
#include "aoi/simulator.hpp"

namespace fs = std::filesystem;
using namespace aoi;

namespace {

struct Check {
    bool ok = true;
    std::vector<std::string> why;

    void expect(bool cond, const std::string& msg) {
        if (!cond) {
            ok = false;
            why.push_back(msg);
        }
    }
};

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

// ---- criterion 1: closed-form and quadrature moments vs sampling ----------

void moment_oracles(Check& c) {
    SystemParams prm;  // defaults, N = 5
    MomentEvaluator mom(prm);
    double p = 0.25, r = 1.5e6;

    // P-moment closed forms against a million simulated rounds
    Simulator sim(prm, 1001);
    SimResult suite = sim.empirical_moment_suite(p, r, 1000000);
    double ep = mom.expect_P(p, r, prm.n_devices);
    double ep2 = mom.expect_P2(p, r, prm.n_devices);
    c.expect(std::abs(suite.p_moments.mean - ep) <= 0.01 * ep,
             "E{P} closed form off by >1%: " + fmt(suite.p_moments.mean) +
                 " vs " + fmt(ep));
    c.expect(std::abs(suite.p_moments.second - ep2) <= 0.02 * ep2,
             "E{P^2} closed form off by >2%: " + fmt(suite.p_moments.second) +
                 " vs " + fmt(ep2));

    // T-moment quadrature against ten million accepted-gain draws
    GainSampler gs(1002, prm.gain_rate, mom.link(), prm.bandwidth_hz);
    double st = 0.0, st2 = 0.0;
    const std::uint64_t draws = 10000000;
    for (std::uint64_t i = 0; i < draws; ++i) {
        double g = gs.sample_accepted_gain(r);
        double t = prm.data_nats / rate_of_gain(g, mom.link(), prm.bandwidth_hz);
        st += t;
        st2 += t * t;
    }
    st /= static_cast<double>(draws);
    st2 /= static_cast<double>(draws);
    double et = mom.expect_T(r), et2 = mom.expect_T2(r);
    c.expect(std::abs(st - et) <= 0.005 * et,
             "E{T} quadrature off by >0.5%: " + fmt(st) + " vs " + fmt(et));
    c.expect(std::abs(st2 - et2) <= 0.01 * et2,
             "E{T^2} quadrature off by >1%: " + fmt(st2) + " vs " + fmt(et2));

    // geometric moments against direct sampling, 3-sigma bands
    Rng rng(1003);
    for (double theta : {0.15, 0.5, 0.85}) {
        auto [m, m2] = geometric_moments(theta);
        double sum = 0.0;
        const int n = 1000000;
        for (int i = 0; i < n; ++i)
            sum += static_cast<double>(rng.geometric(theta));
        double mean = sum / n;
        double band = 3.0 * std::sqrt((m2 - m * m) / n);
        c.expect(std::abs(mean - m) <= band,
                 "geometric mean outside 3 sigma at theta=" + fmt(theta));
    }
}

// ---- criterion 2: analytic average vs simulated ratio of sums -------------

void renewal_consistency(Check& c) {
    struct Point {
        int n;
        double p, r;
    };
    const double r_ref = 1e6 * std::log(2.0);
    std::vector<Point> pts = {{3, 0.33, r_ref},      {3, 0.2, 2.0 * r_ref},
                              {3, 0.5, 1.5 * r_ref}, {5, 0.2, r_ref},
                              {5, 0.33, 2.5 * r_ref}, {5, 0.4, 1.8e6}};
    std::uint64_t seed = 2001;
    for (const auto& pt : pts) {
        SystemParams prm;
        prm.n_devices = pt.n;
        MomentEvaluator mom(prm);
        AoiObjective obj(mom);
        double analytic = obj.average_aoi(pt.p, pt.r).delta_bar;
        Simulator sim(prm, seed++);
        double simulated = sim.simulate(pt.p, pt.r, 100000).mean_aoi_s;
        c.expect(std::abs(simulated - analytic) <= 0.02 * analytic,
                 "sim vs analytic >2% at N=" + std::to_string(pt.n) +
                     " p=" + fmt(pt.p) + " r=" + fmt(pt.r) + ": " +
                     fmt(simulated) + " vs " + fmt(analytic));
    }
}

// ---- criterion 3: strict monotone directions of the four moments ----------

void moment_monotonicity(Check& c) {
    SystemParams prm;
    MomentEvaluator mom(prm);
    double p = 0.3;
    const int pts = 50;
    double log_lo = std::log(mom.r_min()), log_hi = std::log(mom.r_max());
    double pt_prev = 0.0, pt2_prev = 0.0, pp_prev = 0.0, pp2_prev = 0.0;
    int viol = 0;
    for (int i = 0; i < pts; ++i) {
        double r = std::exp(log_lo + (log_hi - log_lo) * i / (pts - 1));
        double et = mom.expect_T(r), et2 = mom.expect_T2(r);
        double ep = mom.expect_P(p, r, prm.n_devices);
        double ep2 = mom.expect_P2(p, r, prm.n_devices);
        if (i > 0) {
            if (!(et < pt_prev)) ++viol;
            if (!(et2 < pt2_prev)) ++viol;
            if (!(ep > pp_prev)) ++viol;
            if (!(ep2 > pp2_prev)) ++viol;
        }
        pt_prev = et;
        pt2_prev = et2;
        pp_prev = ep;
        pp2_prev = ep2;
    }
    c.expect(viol == 0,
             std::to_string(viol) + " monotonicity violations on the r grid");
}

// ---- criterion 4: unimodality of E{T}E{P} and the split point --------------

void product_unimodality(Check& c) {
    SystemParams prm;
    MomentEvaluator mom(prm);
    double p = 0.3;
    auto product = [&](double r) {
        return mom.expect_T(r) * mom.expect_P(p, r, 1);
    };
    const int pts = 200;
    double log_lo = std::log(mom.r_min()), log_hi = std::log(mom.r_max());
    int sign_changes = 0;
    double prev = product(std::exp(log_lo)), prev_diff = 0.0;
    double grid_best = 1e300, grid_arg = 0.0;
    if (prev < grid_best) {
        grid_best = prev;
        grid_arg = std::exp(log_lo);
    }
    for (int i = 1; i < pts; ++i) {
        double r = std::exp(log_lo + (log_hi - log_lo) * i / (pts - 1));
        double v = product(r);
        double diff = v - prev;
        if (i > 1 && (diff > 0) != (prev_diff > 0)) ++sign_changes;
        prev_diff = diff;
        prev = v;
        if (v < grid_best) {
            grid_best = v;
            grid_arg = r;
        }
    }
    c.expect(sign_changes == 1, "expected exactly one sign change, saw " +
                                    std::to_string(sign_changes));

    double tol = 1e-6 * prm.bandwidth_hz * std::log(2.0);
    bool boundary = false;
    double r_dd = find_r_ddagger(mom, p, tol, &boundary);
    double step = grid_arg * (log_hi - log_lo) / (pts - 1);
    c.expect(!boundary, "split point reported at a boundary");
    c.expect(std::abs(r_dd - grid_arg) <= step,
             "split point " + fmt(r_dd) + " not within one grid step of " +
                 fmt(grid_arg));
}

// ---- criterion 5: solver against an exhaustive 200x200 grid ---------------

void solver_vs_oracle(Check& c) {
    for (int n = 3; n <= 7; ++n) {
        SystemParams prm;
        prm.n_devices = n;
        MomentEvaluator mom(prm);
        AoiObjective obj(mom);
        OptimizerReport rep = optimize(obj, SolverConfig{});
        GridSearchResult grid = grid_search_oracle(obj, 200, 200);
        c.expect(rep.converged, "solver did not converge at N=" +
                                    std::to_string(n));
        c.expect(rep.delta_star <= grid.delta_hat * (1.0 + 1e-3),
                 "solver above grid minimum at N=" + std::to_string(n) + ": " +
                     fmt(rep.delta_star) + " vs " + fmt(grid.delta_hat));
    }
}

// ---- criterion 6: fractional-programming stopping certificate -------------

void dinkelbach_certificate(Check& c) {
    SystemParams prm;
    MomentEvaluator mom(prm);
    AoiObjective obj(mom);
    SolverConfig cfg;
    OptimizerReport rep = dinkelbach_solve(obj, cfg);
    c.expect(rep.converged, "outer iteration did not converge");
    c.expect(rep.xi_trace.size() >= 2, "trace too short");
    for (std::size_t i = 1; i < rep.xi_trace.size(); ++i)
        c.expect(rep.xi_trace[i] < rep.xi_trace[i - 1],
                 "xi trace not strictly decreasing at step " +
                     std::to_string(i));
    AoiPoint pt = obj.average_aoi(rep.p_star, rep.r_star);
    double xi_final = rep.xi_trace[rep.xi_trace.size() - 2];
    double gamma = obj.dinkelbach_F(xi_final, rep.p_star, rep.r_star);
    c.expect(std::abs(gamma) <= cfg.dinkelbach_tol * pt.denominator,
             "|Gamma| certificate violated: " + fmt(std::abs(gamma)) + " > " +
                 fmt(cfg.dinkelbach_tol * pt.denominator));
}

// ---- criterion 7: published-figure trends ----------------------------------

void figure_trends(Check& c) {
    ExperimentSpec spec;
    spec.out_dir = (fs::temp_directory_path() / "aoi_acc_fig").string();
    fs::create_directories(spec.out_dir);
    spec.strict = true;
    spec.p_grid = 100;
    ExperimentResult f3 = run_fig3(spec);
    for (const auto& f : f3.failures) c.expect(false, "power sweep: " + f);
    ExperimentResult f4 = run_fig4(spec);
    for (const auto& f : f4.failures) c.expect(false, "p sweep: " + f);
    fs::remove_all(spec.out_dir);
}

// ---- criterion 8: DM branch-and-reduce certificates ------------------------

void grid_never_beats(Check& c, const DmProblem& dm, double eps,
                      const std::string& label) {
    DmSolution s = minimize_dm(dm, eps);
    c.expect(s.converged, label + ": solver hit its budget");
    const int pts = 100000;
    double best = 1e300;
    int arg = 0;
    std::vector<double> vals(pts + 1);
    for (int i = 0; i <= pts; ++i) {
        double x = dm.lo + (dm.hi - dm.lo) * i / pts;
        vals[i] = dm.objective(x);
        if (vals[i] < best) {
            best = vals[i];
            arg = i;
        }
    }
    // the grid can undershoot the solver only by the certified gap plus the
    // local variation of one grid cell
    double resolution = 0.0;
    if (arg > 0) resolution = std::max(resolution, std::abs(vals[arg - 1] - vals[arg]));
    if (arg < pts) resolution = std::max(resolution, std::abs(vals[arg + 1] - vals[arg]));
    c.expect(s.f_star <= best + eps + resolution,
             label + ": grid beats solver, " + fmt(best) + " + slack < " +
                 fmt(s.f_star));
}

void dm_certificates(Check& c) {
    DmProblem toy;
    toy.lo = 0.0;
    toy.hi = 1.0;
    toy.f_inc = [](double x) { return x * x; };
    toy.g_inc = [](double x) { return x; };
    DmSolution s = minimize_dm(toy, 1e-8);
    c.expect(std::abs(s.x_star - 0.5) <= 1e-8,
             "toy minimizer " + fmt(s.x_star) + " not 0.5 +- 1e-8");
    c.expect(s.gap <= 1e-8, "toy gap " + fmt(s.gap) + " above 1e-8");
    c.expect(s.converged, "toy instance did not converge");

    SystemParams prm;
    MomentEvaluator mom(prm);
    AoiObjective obj(mom);
    double xi = 0.0125;
    double eps = 1e-6 * (xi + 1.0);

    double p = 0.33;
    double r_dd = find_r_ddagger(mom, p, 1.0);
    auto [low, high] = obj.dm_split_r(xi, p, r_dd);
    auto clamp = [](DmProblem dm) {
        std::tie(dm.lo, dm.hi) = clamp_open(dm.lo, dm.hi);
        return dm;
    };
    grid_never_beats(c, clamp(low), eps, "r piece below the split");
    grid_never_beats(c, clamp(high), eps, "r piece above the split");

    double r = 1.5e6;
    for (int sub = 1; sub <= prm.n_devices; ++sub)
        grid_never_beats(c, clamp(obj.dm_split_p(xi, r, sub)), eps,
                         "p subinterval " + std::to_string(sub));
}

// ---- criterion 9: byte-identical CLI reruns ---------------------------------

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

void determinism(Check& c) {
    const char* cli = std::getenv("AOI_CLI");
    if (!cli) {
        c.expect(false, "AOI_CLI not set");
        return;
    }
    struct Job {
        std::string args;
        std::vector<std::string> files;
    };
    std::vector<Job> jobs = {
        {"simulate --p 0.3 --cycles 20000 --seed 5",
         {"simulate.json", "run_config.txt"}},
        {"optimize --seed 5", {"optimizer_report.json", "run_config.txt"}},
        {"fig4 --grid 25 --seed 5",
         {"fig4.csv", "fig4_opt.csv", "fig4.svg", "run_config.txt"}},
    };
    int k = 0;
    for (const auto& job : jobs) {
        fs::path a = fs::temp_directory_path() / ("aoi_acc_det_a" + std::to_string(k));
        fs::path b = fs::temp_directory_path() / ("aoi_acc_det_b" + std::to_string(k));
        ++k;
        for (const auto& dir : {a, b}) {
            fs::remove_all(dir);
            fs::create_directories(dir);
            std::string cmd = std::string(cli) + " " + job.args + " --out " +
                              dir.string() + " > /dev/null 2>&1";
            c.expect(std::system(cmd.c_str()) == 0, job.args + ": nonzero exit");
        }
        for (const auto& f : job.files) {
            std::string va = slurp(a / f), vb = slurp(b / f);
            c.expect(!va.empty(), job.args + ": " + f + " missing or empty");
            c.expect(va == vb, job.args + ": " + f + " differs between reruns");
        }
        fs::remove_all(a);
        fs::remove_all(b);
    }
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        std::string name;
        std::function<void(Check&)> fn;
    };
    std::vector<Criterion> criteria = {
        {1, "moment oracles", moment_oracles},
        {2, "renewal consistency", renewal_consistency},
        {3, "moment monotonicity", moment_monotonicity},
        {4, "product unimodality", product_unimodality},
        {5, "solver vs grid oracle", solver_vs_oracle},
        {6, "stopping certificate", dinkelbach_certificate},
        {7, "figure trends", figure_trends},
        {8, "DM certificates", dm_certificates},
        {9, "determinism", determinism},
    };

    bool all_ok = true;
    for (const auto& cr : criteria) {
        Check c;
        auto t0 = std::chrono::steady_clock::now();
        try {
            cr.fn(c);
        } catch (const std::exception& e) {
            c.expect(false, std::string("exception: ") + e.what());
        }
        double secs = std::chrono::duration<double>(
                          std::chrono::steady_clock::now() - t0)
                          .count();
        std::cout << "criterion " << cr.id << " (" << cr.name
                  << "): " << (c.ok ? "PASS" : "FAIL") << std::endl;
        std::cerr << "  [" << fmt(secs) << " s]" << std::endl;
        for (const auto& w : c.why) std::cerr << "  - " << w << std::endl;
        all_ok = all_ok && c.ok;
    }
    return all_ok ? 0 : 1;
}
