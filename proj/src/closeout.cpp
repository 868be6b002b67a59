#include "shortsale/closeout.hpp"

#include "shortsale/errors.hpp"
#include "shortsale/gbm.hpp"

#include <cmath>

namespace shortsale {

namespace {

void check_price(double x, const char* name) {
    if (!(x > 0.0) || !std::isfinite(x))
        throw InvalidArgument(std::string(name) + " must be positive and finite");
}

constexpr double kZeroRateTol = 1e-12;

} // namespace

ConstrainedResult solve_constrained(double x0, const ModelParams& p) {
    p.validate();
    check_price(x0, "x0");
    ConstrainedResult out;
    if (p.c == 0.0) {
        // Knock-out barrier sits at the initial price: the position ends at
        // inception with zero profit.
        out.z = x0;
        out.immediate_close = true;
        return out;
    }
    switch (classify(x0, p)) {
        case Regime::A: {
            const SimplerSolution sol = solve_simpler(x0, p);
            if (sol.z_star < x0) {
                out.z = sol.z_star;
                out.value = value_simpler(sol, x0);
                return out;
            }
            break;  // threshold at or above the initial price: stop now
        }
        case Regime::E: {
            const SimplerSolution sol = solve_simpler(x0, p);
            out.z = 0.0;
            out.value = value_simpler(sol, x0);
            out.wait_forever = true;
            return out;
        }
        default:
            break;  // stop immediately in regimes B, C, D, F, G
    }
    out.z = x0;
    out.immediate_close = true;
    return out;
}

UnconstrainedResult solve_unconstrained(double x0, const ModelParams& p) {
    p.validate();
    check_price(x0, "x0");
    UnconstrainedResult out;
    if (p.r > kZeroRateTol) {
        const double nu = p.nu();
        const double s = std::sqrt(nu * nu + 2.0 * p.r / (p.sigma * p.sigma));
        const double z = x0 * (s + nu) / (1.0 + s + nu);
        out.z = z;
        // phi_r(x0)/phi_r(z) = (z/x0)^(s+nu)
        out.value = (x0 - z) * std::exp((s + nu) * (std::log(z) - std::log(x0)));
        return out;
    }
    const double half_var = 0.5 * p.sigma * p.sigma;
    if (std::abs(p.mu - half_var) <= kZeroRateTol * std::max(1.0, half_var)) {
        out.z = 0.0;
        out.value = x0;
        out.no_optimal_policy = true;
        return out;
    }
    if (p.mu < half_var) {
        out.z = 0.0;
        out.value = x0;
        out.wait_forever = true;
        return out;
    }
    out.z = x0;
    out.value = 0.0;
    out.immediate_close = true;
    return out;
}

ShortSaleSolution solve(double x0, const ModelParams& p) {
    const ConstrainedResult con = solve_constrained(x0, p);
    const UnconstrainedResult unc = solve_unconstrained(x0, p);
    ShortSaleSolution sol;
    sol.x0 = x0;
    sol.params = p;
    sol.regime = classify(x0, p);
    sol.constrained_z = con.z;
    sol.constrained_value = con.value;
    sol.unconstrained_z = unc.z;
    sol.unconstrained_value = unc.value;
    sol.immediate_close = con.immediate_close;
    sol.wait_forever = con.wait_forever;
    sol.no_optimal_policy = unc.no_optimal_policy;
    return sol;
}

double zero_collateral_limit_threshold(double x0, const ModelParams& p) {
    ModelParams q = p;
    q.c = 1e-6;
    return solve_constrained(x0, q).z;
}

} // namespace shortsale
