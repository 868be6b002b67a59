#pragma once

#include "shortsale/boundary.hpp"
#include "shortsale/params.hpp"
#include "shortsale/regime.hpp"

namespace shortsale {

struct ConstrainedResult {
    double z = 0.0;      ///< optimal repurchase threshold in [0, x0]
    double value = 0.0;  ///< value of the short position at x0
    bool immediate_close = false;
    bool wait_forever = false;
};

struct UnconstrainedResult {
    double z = 0.0;
    double value = 0.0;
    bool immediate_close = false;
    bool wait_forever = false;
    bool no_optimal_policy = false;  ///< zero rate with mu = sigma^2/2: value x0, no attaining rule
};

/// Joint solution of the constrained (margin + recall) and unconstrained
/// close-out problems at initial price x0.
struct ShortSaleSolution {
    double x0 = 1.0;
    ModelParams params;
    Regime regime = Regime::A;  ///< regime of the fixed-barrier problem at kappa = x0
    double constrained_z = 0.0;
    double constrained_value = 0.0;
    double unconstrained_z = 0.0;
    double unconstrained_value = 0.0;
    bool immediate_close = false;
    bool wait_forever = false;
    bool no_optimal_policy = false;
};

/// Constrained problem: instantiate the fixed-barrier solver at kappa = x0.
/// With r > 0, an interior regime-A root below x0 is the threshold; a root at
/// or above x0, or any other regime, means immediate close-out at zero value.
/// With r = 0 and mu < 0 the position is held until recall or knock-out
/// (threshold 0); with r = 0 and mu >= 0 it is closed immediately. c = 0
/// knocks the position out at inception, so it is valueless.
ConstrainedResult solve_constrained(double x0, const ModelParams& p);

/// Unconstrained benchmark (no collateral barrier, no recall). For r > 0 the
/// threshold is x0 (s + nu)/(1 + s + nu), s = sqrt(nu^2 + 2 r / sigma^2),
/// with value (x0 - z) phi_r(x0)/phi_r(z). For r = 0 the solution is wait
/// forever (value x0) when mu < sigma^2/2, value x0 with no attaining policy
/// when mu = sigma^2/2, and immediate close-out when mu > sigma^2/2.
UnconstrainedResult solve_unconstrained(double x0, const ModelParams& p);

/// Bundles both solvers plus the regime diagnostic.
ShortSaleSolution solve(double x0, const ModelParams& p);

/// Threshold limit as the collateral budget shrinks to zero (evaluated at
/// c = 1e-6). The position itself is valueless at c = 0; this reports where
/// the repurchase boundary ends up in the limit.
double zero_collateral_limit_threshold(double x0, const ModelParams& p);

} // namespace shortsale
