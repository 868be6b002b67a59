// Command-line front end: single solves, parameter sweeps (CSV/SVG), Monte
// Carlo verification runs, and the drift-misestimation calculator.

#include "shortsale/closeout.hpp"
#include "shortsale/errors.hpp"
#include "shortsale/mc.hpp"
#include "shortsale/statics.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <map>
#include <string>

namespace {

std::string full(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

std::string cents(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "$%.2f", v);
    return std::string(buf);
}

struct ModelFlags {
    double mu = -0.02, sigma = 0.3, r = 0.05, lambda = 0.01, c = 50.0, x0 = 1.0;

    shortsale::ModelParams params() const {
        shortsale::ModelParams p;
        p.mu = mu;
        p.sigma = sigma;
        p.r = r;
        p.lambda = lambda;
        p.c = c;
        return p;
    }
};

void add_model_flags(CLI::App& app, ModelFlags& m) {
    app.add_option("--mu", m.mu, "drift rate per year")->capture_default_str();
    app.add_option("--sigma", m.sigma, "volatility per sqrt-year")->capture_default_str();
    app.add_option("--r", m.r, "discount rate per year")->capture_default_str();
    app.add_option("--lambda", m.lambda, "recall intensity per year")->capture_default_str();
    app.add_option("--c", m.c, "collateral budget")->capture_default_str();
    app.add_option("--x0", m.x0, "initial stock price")->capture_default_str();
}

void print_solution_kv(const shortsale::ShortSaleSolution& sol) {
    std::cout << "x0=" << full(sol.x0) << '\n'
              << "mu=" << full(sol.params.mu) << '\n'
              << "sigma=" << full(sol.params.sigma) << '\n'
              << "r=" << full(sol.params.r) << '\n'
              << "lambda=" << full(sol.params.lambda) << '\n'
              << "c=" << full(sol.params.c) << '\n'
              << "regime=" << shortsale::regime_letter(sol.regime) << '\n'
              << "z_constrained=" << full(sol.constrained_z) << '\n'
              << "v_constrained=" << full(sol.constrained_value) << '\n'
              << "z_unconstrained=" << full(sol.unconstrained_z) << '\n'
              << "v_unconstrained=" << full(sol.unconstrained_value) << '\n'
              << "immediate_close=" << (sol.immediate_close ? 1 : 0) << '\n'
              << "wait_forever=" << (sol.wait_forever ? 1 : 0) << '\n'
              << "no_optimal_policy=" << (sol.no_optimal_policy ? 1 : 0) << '\n';
    if (sol.params.c == 0.0)
        std::cout << "limit_z=" << full(shortsale::zero_collateral_limit_threshold(
                                       sol.x0, sol.params))
                  << '\n';
}

void print_solution_human(const shortsale::ShortSaleSolution& sol) {
    std::cout << "regime " << shortsale::regime_letter(sol.regime) << '\n'
              << "constrained    z* " << cents(sol.constrained_z) << "  value "
              << cents(sol.constrained_value);
    if (sol.immediate_close) std::cout << "  (immediate close-out)";
    if (sol.wait_forever) std::cout << "  (hold until recall or knock-out)";
    std::cout << '\n'
              << "unconstrained  z* " << cents(sol.unconstrained_z) << "  value "
              << cents(sol.unconstrained_value);
    if (sol.no_optimal_policy) std::cout << "  (no attaining policy)";
    std::cout << '\n';
    if (sol.params.c == 0.0)
        std::cout << "zero-collateral threshold limit "
                  << cents(shortsale::zero_collateral_limit_threshold(sol.x0, sol.params))
                  << '\n';
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"optimal close-out of a collateral-constrained short position"};
    app.require_subcommand(1);
    app.set_config("--config", "", "key=value file preloading any flag (flags win)");
    app.allow_config_extras(CLI::config_extras_mode::ignore_all);

    ModelFlags m;
    add_model_flags(app, m);

    auto* cmd_solve = app.add_subcommand("solve", "solve a single close-out problem");
    cmd_solve->fallthrough();
    std::string format = "human";
    cmd_solve->add_option("--format", format, "human | kv (full precision)")
        ->check(CLI::IsMember({"human", "kv"}))
        ->capture_default_str();

    auto* cmd_sweep = app.add_subcommand("sweep", "comparative statics over one parameter");
    cmd_sweep->fallthrough();
    std::string vary = "mu";
    double from = 0.0, to = 1.0;
    int steps = 2, sweep_threads = 0;
    std::string csv_path, svg_path;
    cmd_sweep->add_option("--vary", vary, "mu | sigma | r | lambda | c")
        ->check(CLI::IsMember({"mu", "sigma", "r", "lambda", "c"}))
        ->required();
    cmd_sweep->add_option("--from", from, "first grid value")->required();
    cmd_sweep->add_option("--to", to, "last grid value")->required();
    cmd_sweep->add_option("--steps", steps, "grid points (>= 2)")->required();
    cmd_sweep->add_option("--csv", csv_path, "write CSV here instead of stdout");
    cmd_sweep->add_option("--svg", svg_path, "also write a two-panel SVG chart");
    cmd_sweep->add_option("--threads", sweep_threads, "worker count (0 = auto)")
        ->capture_default_str();

    auto* cmd_mc = app.add_subcommand("mc", "Monte Carlo estimate of a threshold rule");
    cmd_mc->fallthrough();
    shortsale::McConfig cfg;
    double mc_z = -1.0;
    std::string estimator = "killed";
    bool no_bridge = false;
    cmd_mc->add_option("--z", mc_z, "repurchase threshold (default: solved constrained z*)");
    cmd_mc->add_option("--paths", cfg.n_paths, "number of paths")->capture_default_str();
    cmd_mc->add_option("--dt", cfg.dt, "base step in years")->capture_default_str();
    cmd_mc->add_option("--horizon", cfg.horizon, "truncation horizon in years")
        ->capture_default_str();
    cmd_mc->add_option("--seed", cfg.seed, "RNG seed")->capture_default_str();
    cmd_mc->add_option("--estimator", estimator, "killed | integral")
        ->check(CLI::IsMember({"killed", "integral"}))
        ->capture_default_str();
    cmd_mc->add_flag("--no-bridge", no_bridge, "disable Brownian-bridge crossing checks");
    cmd_mc->add_option("--threads", cfg.threads, "worker count (0 = auto)")
        ->capture_default_str();

    auto* cmd_drift = app.add_subcommand("drift-risk",
                                         "probability of estimating a non-positive drift");
    cmd_drift->fallthrough();
    double obs_years = 100.0;
    cmd_drift->add_option("--T", obs_years, "observation window in years")
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        const shortsale::ModelParams p = m.params();
        if (*cmd_solve) {
            const auto sol = shortsale::solve(m.x0, p);
            if (format == "kv")
                print_solution_kv(sol);
            else
                print_solution_human(sol);
        } else if (*cmd_sweep) {
            shortsale::SweepSpec spec;
            spec.base = p;
            spec.x0 = m.x0;
            spec.from = from;
            spec.to = to;
            spec.steps = steps;
            spec.threads = sweep_threads;
            if (vary == "mu") spec.vary = shortsale::SweepParam::Mu;
            else if (vary == "sigma") spec.vary = shortsale::SweepParam::Sigma;
            else if (vary == "r") spec.vary = shortsale::SweepParam::R;
            else if (vary == "lambda") spec.vary = shortsale::SweepParam::Lambda;
            else spec.vary = shortsale::SweepParam::C;
            const auto rows = shortsale::run_sweep(spec);
            if (csv_path.empty())
                shortsale::emit_csv(rows, spec, std::cout);
            else
                shortsale::emit_csv(rows, spec, csv_path);
            if (!svg_path.empty()) shortsale::emit_svg(rows, spec, svg_path);
        } else if (*cmd_mc) {
            cfg.bridge_correction = !no_bridge;
            cfg.estimator = estimator == "integral" ? shortsale::McEstimator::IntegralForm
                                                    : shortsale::McEstimator::KilledDiscount;
            double z = mc_z;
            if (z < 0.0) z = shortsale::solve_constrained(m.x0, p).z;
            const auto est = shortsale::estimate_value(m.x0, z, p, cfg);
            std::cout << "z=" << full(z) << '\n'
                      << "mean=" << full(est.mean) << '\n'
                      << "std_error=" << full(est.std_error) << '\n'
                      << "n_paths=" << est.n_paths << '\n'
                      << "truncated_fraction=" << full(est.truncated_fraction) << '\n';
        } else if (*cmd_drift) {
            const double prob = shortsale::drift_misestimation(m.mu, m.sigma, obs_years);
            std::cout << "probability=" << full(prob) << '\n';
        }
    } catch (const shortsale::InvalidArgument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
