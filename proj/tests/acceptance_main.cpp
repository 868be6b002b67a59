// Acceptance suite: runs every acceptance criterion at its stated tolerance
// and prints one [PASS]/[FAIL] line per criterion. Exits with the number of
// failed criteria. Needs the CLI binary for the determinism checks:
//   acceptance --cli /path/to/shortsale

#include "shortsale/boundary.hpp"
#include "shortsale/closeout.hpp"
#include "shortsale/gbm.hpp"
#include "shortsale/mc.hpp"
#include "shortsale/regime.hpp"
#include "shortsale/rng.hpp"
#include "shortsale/statics.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace shortsale;

int g_failed_criteria = 0;
bool g_current_ok = true;

void check(bool cond, const std::string& what) {
    if (!cond) {
        g_current_ok = false;
        std::cout << "       failed: " << what << '\n';
    }
}

void check_close(const std::string& what, double got, double want, double tol) {
    if (!(std::abs(got - want) <= tol)) {
        g_current_ok = false;
        char buf[160];
        std::snprintf(buf, sizeof(buf), "%s: got %.6f, want %.6f +- %.4f", what.c_str(), got,
                      want, tol);
        std::cout << "       failed: " << buf << '\n';
    }
}

void finish(const std::string& label) {
    std::cout << (g_current_ok ? "[PASS] " : "[FAIL] ") << label << std::endl;
    if (!g_current_ok) ++g_failed_criteria;
    g_current_ok = true;
}

ModelParams make(double mu, double sigma, double r, double lambda, double c = 50.0) {
    ModelParams p;
    p.mu = mu;
    p.sigma = sigma;
    p.r = r;
    p.lambda = lambda;
    p.c = c;
    return p;
}

const ModelParams kBaseNeg = make(-0.02, 0.3, 0.05, 0.01);
const ModelParams kBasePos = make(0.02, 0.3, 0.05, 0.01);

// ---------------------------------------------------------------------------

void criterion_1_unconstrained_anchors() {
    struct Anchor {
        double mu, sigma, z, v;
    };
    const Anchor anchors[] = {
        {0.05, 0.3, 0.53, 0.23}, {-0.02, 0.3, 0.36, 0.36}, {0.02, 0.3, 0.45, 0.29},
        {-0.02, 0.5, 0.22, 0.51}, {0.02, 0.5, 0.25, 0.47},
    };
    for (const Anchor& a : anchors) {
        const auto res = solve_unconstrained(1.0, make(a.mu, a.sigma, 0.05, 0.01));
        std::ostringstream tag;
        tag << "mu=" << a.mu << " sigma=" << a.sigma;
        check_close("unconstrained z* " + tag.str(), res.z, a.z, 0.005);
        check_close("unconstrained V " + tag.str(), res.value, a.v, 0.005);
    }
    finish("criterion 1: unconstrained closed forms match the quoted anchors");
}

void criterion_2_zero_rate_closed_form() {
    const auto con = solve_constrained(1.0, make(-0.02, 0.3, 0.0, 0.01));
    check_close("zero-rate constrained V(1)", con.value, 0.5998, 0.005);
    check(con.wait_forever, "zero-rate negative drift must hold until forced out");
    check(con.z == 0.0, "zero-rate negative drift threshold must be 0");
    const auto unc = solve_unconstrained(1.0, make(-0.02, 0.3, 0.0, 0.01));
    check(unc.value == 1.0, "zero-rate unconstrained value must equal x0 exactly");
    finish("criterion 2: zero-rate constrained closed form and its unconstrained counterpart");
}

std::vector<SweepRow> sweep(SweepParam vary, double from, double to, int steps,
                            const ModelParams& base) {
    SweepSpec spec;
    spec.vary = vary;
    spec.from = from;
    spec.to = to;
    spec.steps = steps;
    spec.base = base;
    spec.x0 = 1.0;
    return run_sweep(spec);
}

void criterion_3_lambda_anchors() {
    const auto neg = sweep(SweepParam::Lambda, 0.0, 0.1, 11, kBaseNeg);
    check_close("z*(lambda=0.1), mu=-0.02", neg.back().z_constrained, 0.45, 0.01);
    check_close("V(lambda=0), mu=-0.02", neg.front().v_constrained, 0.35, 0.01);
    check_close("V(lambda=0.1), mu=-0.02", neg.back().v_constrained, 0.13, 0.01);
    const auto pos = sweep(SweepParam::Lambda, 0.0, 0.1, 11, kBasePos);
    check_close("z*(lambda=0), mu=0.02", pos.front().z_constrained, 0.58, 0.01);
    check_close("z*(lambda=0.1), mu=0.02", pos.back().z_constrained, 0.90, 0.01);
    check_close("V(lambda=0), mu=0.02", pos.front().v_constrained, 0.11, 0.01);
    check_close("V(lambda=0.1), mu=0.02", pos.back().v_constrained, 0.00, 0.01);
    finish("criterion 3: recall-intensity sweep anchors");
}

void criterion_4_collateral_anchors() {
    check_close("limit threshold c -> 0, mu=-0.02",
                zero_collateral_limit_threshold(1.0, kBaseNeg), 0.61, 0.01);
    const auto neg = sweep(SweepParam::C, 0.0, 100.0, 26, kBaseNeg);
    check_close("z*(c=100), mu=-0.02", neg.back().z_constrained, 0.37, 0.01);
    check_close("V(c=100), mu=-0.02", neg.back().v_constrained, 0.31, 0.01);
    const auto pos = sweep(SweepParam::C, 0.0, 100.0, 26, kBasePos);
    for (const auto& row : pos)
        if (row.param_value <= 4.0)
            check(row.immediate_close,
                  "immediate close-out expected at c = " + std::to_string(row.param_value));
    check_close("z*(c=100), mu=0.02", pos.back().z_constrained, 0.60, 0.01);
    check_close("V(c=100), mu=0.02", pos.back().v_constrained, 0.10, 0.01);
    finish("criterion 4: collateral-budget sweep anchors");
}

void criterion_5_rate_sweep() {
    const auto rows = sweep(SweepParam::R, 0.0, 0.1, 11, kBasePos);
    for (const auto& row : rows) {
        const bool should_close = row.param_value <= 0.03 + 1e-12;
        check(row.immediate_close == should_close,
              "immediate-close flag wrong at r = " + std::to_string(row.param_value));
    }
    const auto& last = rows.back();
    check_close("constrained z*(r=0.1)", last.z_constrained, 0.60, 0.01);
    check_close("constrained V(r=0.1)", last.v_constrained, 0.15, 0.01);
    check_close("unconstrained z*(r=0.1)", last.z_unconstrained, 0.55, 0.01);
    check_close("unconstrained V(r=0.1)", last.v_unconstrained, 0.21, 0.01);
    finish("criterion 5: discount-rate sweep behaviour");
}

void criterion_6_drift_boundary() {
    check(solve_constrained(1.0, make(0.035, 0.3, 0.05, 0.01)).immediate_close,
          "mu=0.035 must close immediately");
    const auto interior = solve_constrained(1.0, make(0.025, 0.3, 0.05, 0.01));
    check(!interior.immediate_close && interior.z < 1.0,
          "mu=0.025 must admit an interior threshold");
    finish("criterion 6: immediate-close drift boundary");
}

void criterion_7_drift_misestimation() {
    check_close("P(mu_hat <= 0)", drift_misestimation(0.04, 0.3, 100.0), 0.0912, 0.0001);
    finish("criterion 7: drift misestimation probability");
}

ModelParams random_params(Xoshiro256pp& rng) {
    auto uniform = [&](double lo, double hi) { return lo + (hi - lo) * rng.next_open01(); };
    ModelParams p;
    p.mu = uniform(-0.1, 0.1);
    p.sigma = uniform(0.05, 0.8);
    p.r = uniform(0.0, 0.12);
    p.lambda = uniform(0.0, 0.2);
    p.c = uniform(0.0, 100.0);
    if (p.lambda + p.r <= 1e-6) p.lambda = 0.01;
    return p;
}

void criterion_8_structural_suite() {
    // boundary function vanishes (with its slope) at the barrier
    for (const auto& p : {kBaseNeg, kBasePos, make(-0.03, 0.5, 0.0, 0.02),
                          make(0.04, 0.2, 0.08, 0.1, 5.0)}) {
        check(std::abs(eval_H(1.0 + p.c, 1.0, p)) < 1e-9, "H(kappa+c) not ~0");
        check(std::abs(eval_H_prime(1.0 + p.c, 1.0, p)) < 1e-9, "H'(kappa+c) not ~0");
    }

    // smooth pasting and the interior ODE in regime A
    for (const auto& p : {kBaseNeg, kBasePos}) {
        const SimplerSolution sol = solve_simpler(1.0, p);
        const double z = sol.z_star;
        check(std::abs(value_simpler_derivative(sol, z * (1.0 + 1e-12)) + 1.0) < 1e-8,
              "smooth-pasting residual too large");
        for (int i = 1; i <= 60; ++i) {
            const double x = z + (1.0 + p.c - z) * i / 61.0;
            const double v = value_simpler(sol, x);
            const double d1 = value_simpler_derivative(sol, x);
            const double d2 = value_simpler_second_derivative(sol, x);
            const double residual = 0.5 * p.sigma * p.sigma * x * x * d2 + p.mu * x * d1 -
                                    (p.lambda + p.r) * v + p.lambda * (1.0 - x);
            const double scale = std::max({1.0, std::abs(v), std::abs(p.mu * x * d1)});
            check(std::abs(residual) < 1e-8 * scale, "ODE residual too large");
        }
        // early-exercise premium: zero outside, strictly positive inside
        for (int i = 0; i <= 80; ++i) {
            const double x = 1e-3 + (2.0 * (1.0 + p.c)) * i / 80.0;
            const double gap = early_exercise_gap(sol, x);
            check(gap >= -1e-10, "premium must be non-negative");
            if (x > z * 1.001 && x < (1.0 + p.c) * 0.999)
                check(gap > 0.0, "premium must be strictly positive inside");
        }
    }
    {
        const SimplerSolution sol = solve_simpler(1.0, make(-0.02, 0.3, 0.0, 0.01));
        for (double x : {0.1, 0.5, 0.9, 26.0, 50.0})
            check(early_exercise_gap(sol, x) > 0.0,
                  "regime-E premium must be strictly positive inside");
    }

    // dominance and homogeneity across random draws
    Xoshiro256pp rng(918273645, 0);
    for (int i = 0; i < 500; ++i) {
        const ModelParams p = random_params(rng);
        const ShortSaleSolution sol = solve(1.0, p);
        std::ostringstream tag;
        tag << "draw " << i << " (mu=" << p.mu << " sigma=" << p.sigma << " r=" << p.r
            << " lambda=" << p.lambda << " c=" << p.c << ")";
        check(sol.constrained_z >= sol.unconstrained_z - 1e-12,
              "threshold dominance violated at " + tag.str());
        check(sol.constrained_value >= -1e-12 &&
                  sol.constrained_value <= sol.unconstrained_value + 1e-12 &&
                  sol.unconstrained_value <= 1.0 + 1e-12,
              "value dominance violated at " + tag.str());
        const double t = 3.0;
        ModelParams q = p;
        q.c = p.c * t;
        const ShortSaleSolution scaled = solve(t, q);
        const auto close = [&](double a, double b) {
            return std::abs(a - b) <= 1e-10 * std::max({1.0, std::abs(a), std::abs(b)});
        };
        check(close(scaled.constrained_z, t * sol.constrained_z) &&
                  close(scaled.constrained_value, t * sol.constrained_value) &&
                  close(scaled.unconstrained_z, t * sol.unconstrained_z) &&
                  close(scaled.unconstrained_value, t * sol.unconstrained_value),
              "homogeneity violated at " + tag.str());
    }

    // vanishing frictions: constrained solution approaches the unconstrained one
    ModelParams loose = kBaseNeg;
    loose.c = 1e3;
    loose.lambda = 1e-6;
    const ShortSaleSolution sol = solve(1.0, loose);
    check(std::abs(sol.constrained_z - sol.unconstrained_z) < 1e-2,
          "threshold limit consistency");
    check(std::abs(sol.constrained_value - sol.unconstrained_value) < 1e-2,
          "value limit consistency");
    finish("criterion 8: structural and property suite");
}

void criterion_9_oracle_equivalence() {
    McConfig cfg;
    cfg.n_paths = 200000;
    cfg.dt = 1.0 / 3650.0;
    cfg.horizon = 200.0;
    cfg.bridge_correction = true;
    cfg.seed = 612;

    struct Case {
        const char* name;
        ModelParams p;
    };
    const Case cases[] = {
        {"mu=0.05", make(0.05, 0.3, 0.05, 0.01)},
        {"mu=-0.02", kBaseNeg},
        {"mu=0.02", kBasePos},
        {"mu=-0.02 sigma=0.5", make(-0.02, 0.5, 0.05, 0.01)},
        {"mu=0.02 sigma=0.5", make(0.02, 0.5, 0.05, 0.01)},
        {"regime E", make(-0.02, 0.3, 0.0, 0.01)},
        {"mu=-0.02 lambda=0", make(-0.02, 0.3, 0.05, 0.0)},
        {"mu=-0.02 lambda=0.1", make(-0.02, 0.3, 0.05, 0.1)},
        {"mu=0.02 lambda=0", make(0.02, 0.3, 0.05, 0.0)},
        {"mu=0.02 lambda=0.1", make(0.02, 0.3, 0.05, 0.1)},
        {"mu=-0.02 c=1e-6", make(-0.02, 0.3, 0.05, 0.01, 1e-6)},
        {"mu=-0.02 c=100", make(-0.02, 0.3, 0.05, 0.01, 100.0)},
        {"mu=0.02 c=4", make(0.02, 0.3, 0.05, 0.01, 4.0)},
        {"mu=0.02 c=100", make(0.02, 0.3, 0.05, 0.01, 100.0)},
    };
    std::uint64_t case_index = 0;
    for (const Case& cs : cases) {
        const auto t0 = std::chrono::steady_clock::now();
        cfg.seed = 612 + 1000 * case_index++;  // decorrelate the per-case checks
        const auto analytic = solve_constrained(1.0, cs.p);
        const McEstimate est = estimate_value(1.0, analytic.z, cs.p, cfg);
        const double tol = 3.0 * est.std_error + 0.005;
        const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                            std::chrono::steady_clock::now() - t0)
                            .count();
        std::printf("       %-22s analytic %+.5f  mc %+.5f +- %.5f  trunc %.4f  (%lld ms)\n",
                    cs.name, analytic.value, est.mean, est.std_error,
                    est.truncated_fraction, static_cast<long long>(ms));
        check_close(std::string("oracle vs analytic, ") + cs.name, est.mean, analytic.value,
                    tol);
    }

    // the two estimators agree on a short-lived interior case
    {
        const ModelParams p = make(0.02, 0.5, 0.05, 0.2);
        const auto analytic = solve_constrained(1.0, p);
        McConfig acfg = cfg;
        acfg.n_paths = 50000;
        acfg.dt = 1.0 / 1460.0;
        const McEstimate killed = estimate_value(1.0, analytic.z, p, acfg);
        acfg.estimator = McEstimator::IntegralForm;
        const McEstimate integral = estimate_value(1.0, analytic.z, p, acfg);
        const double combined = std::hypot(killed.std_error, integral.std_error);
        std::printf("       estimator agreement: killed %+.5f  integral %+.5f  (3*se %.5f)\n",
                    killed.mean, integral.mean, 3.0 * combined);
        check(std::abs(killed.mean - integral.mean) <= 3.0 * combined,
              "killed-discount and integral-form estimators disagree");
    }

    // sub-optimality of perturbed thresholds in the base regime-A case
    {
        const auto analytic = solve_constrained(1.0, kBaseNeg);
        for (double f : {0.9, 1.1}) {
            const McEstimate est = estimate_value(1.0, analytic.z * f, kBaseNeg, cfg);
            check(est.mean <= analytic.value + 3.0 * est.std_error,
                  "perturbed threshold appears to beat the optimum");
        }
    }
    finish("criterion 9: Monte Carlo oracle equivalence");
}

// --------------------------------------------------------------------------
// criterion 10 helpers: drive the CLI binary

std::string g_cli_path;

int run_command(const std::string& command) { return std::system(command.c_str()); }

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

void criterion_10_determinism() {
    if (g_cli_path.empty()) {
        check(false, "CLI path not supplied (--cli)");
        finish("criterion 10: CLI determinism");
        return;
    }
    const std::string cli = "\"" + g_cli_path + "\"";

    const std::string sweep_args =
        " --mu -0.02 sweep --vary lambda --from 0 --to 0.1 --steps 11";
    check(run_command(cli + sweep_args + " --threads 1 --csv acc_a.csv --svg acc_a.svg") == 0,
          "sweep run 1 failed");
    check(run_command(cli + sweep_args + " --threads 3 --csv acc_b.csv --svg acc_b.svg") == 0,
          "sweep run 2 failed");
    check(!read_file("acc_a.csv").empty(), "sweep CSV is empty");
    check(read_file("acc_a.csv") == read_file("acc_b.csv"),
          "sweep CSV bytes differ across worker counts");
    check(read_file("acc_a.svg") == read_file("acc_b.svg"),
          "sweep SVG bytes differ across worker counts");

    const std::string mc_args =
        " --mu -0.02 mc --z 0.5 --paths 20000 --dt 0.0027397260273972603 --seed 99";
    check(run_command(cli + mc_args + " --threads 1 > acc_mc_a.txt") == 0, "mc run 1 failed");
    check(run_command(cli + mc_args + " --threads 2 > acc_mc_b.txt") == 0, "mc run 2 failed");
    check(!read_file("acc_mc_a.txt").empty(), "mc output is empty");
    check(read_file("acc_mc_a.txt") == read_file("acc_mc_b.txt"),
          "mc output bytes differ across worker counts");
    finish("criterion 10: byte-identical sweep and mc output under fixed seeds");
}

void extra_cli_round_trip() {
    if (g_cli_path.empty()) return;
    const std::string cli = "\"" + g_cli_path + "\"";
    check(run_command(cli + " --mu -0.02 --c 50 solve --format kv > acc_solve.txt") == 0,
          "solve run failed");
    std::map<std::string, std::string> kv;
    {
        std::istringstream in(read_file("acc_solve.txt"));
        std::string line;
        while (std::getline(in, line)) {
            const auto eq = line.find('=');
            if (eq != std::string::npos) kv[line.substr(0, eq)] = line.substr(eq + 1);
        }
    }
    const ShortSaleSolution sol = solve(1.0, kBaseNeg);
    auto parsed = [&](const std::string& key) {
        return std::strtod(kv[key].c_str(), nullptr);
    };
    check(parsed("z_constrained") == sol.constrained_z, "z_constrained does not round-trip");
    check(parsed("v_constrained") == sol.constrained_value,
          "v_constrained does not round-trip");
    check(parsed("z_unconstrained") == sol.unconstrained_z,
          "z_unconstrained does not round-trip");
    check(parsed("v_unconstrained") == sol.unconstrained_value,
          "v_unconstrained does not round-trip");
    check(kv["regime"] == std::string(1, regime_letter(sol.regime)),
          "regime does not round-trip");

    // argument errors exit with status 2
    const int rc = run_command(cli + " --sigma -1 solve > acc_err.txt 2>&1");
    check(WIFEXITED(rc) && WEXITSTATUS(rc) == 2, "argument error must exit with code 2");

    // a key=value config file preloads flags; explicit flags win
    {
        std::ofstream cfg("acc_cfg.txt");
        cfg << "mu=0.05\nsigma=0.3\n";
    }
    check(run_command(cli + " --config acc_cfg.txt solve --format kv > acc_cfg_a.txt") == 0,
          "config-file run failed");
    std::string line, mu_value;
    {
        std::istringstream in(read_file("acc_cfg_a.txt"));
        while (std::getline(in, line))
            if (line.rfind("mu=", 0) == 0) mu_value = line.substr(3);
    }
    check(std::strtod(mu_value.c_str(), nullptr) == 0.05, "config file did not preload mu");
    check(run_command(cli +
                      " --config acc_cfg.txt --mu 0.01 solve --format kv > acc_cfg_b.txt") ==
              0,
          "config-plus-flag run failed");
    {
        std::istringstream in(read_file("acc_cfg_b.txt"));
        while (std::getline(in, line))
            if (line.rfind("mu=", 0) == 0) mu_value = line.substr(3);
    }
    check(std::strtod(mu_value.c_str(), nullptr) == 0.01,
          "explicit flag must win over the config file");
    finish("extra: CLI round trip, exit codes, config-file preloading");
}

} // namespace

int main(int argc, char** argv) {
    for (int i = 1; i + 1 < argc; ++i)
        if (std::string(argv[i]) == "--cli") g_cli_path = argv[i + 1];

    criterion_1_unconstrained_anchors();
    criterion_2_zero_rate_closed_form();
    criterion_3_lambda_anchors();
    criterion_4_collateral_anchors();
    criterion_5_rate_sweep();
    criterion_6_drift_boundary();
    criterion_7_drift_misestimation();
    criterion_8_structural_suite();
    criterion_9_oracle_equivalence();
    criterion_10_determinism();
    extra_cli_round_trip();

    if (g_failed_criteria == 0)
        std::cout << "all acceptance criteria passed" << std::endl;
    else
        std::cout << g_failed_criteria << " acceptance criteria FAILED" << std::endl;
    return g_failed_criteria;
}
