#pragma once

#include "shortsale/params.hpp"
#include "shortsale/regime.hpp"

namespace shortsale {

enum class ValueKind { PiecewiseRegimeA, ClosedFormRegimeE, ImmediatePayoff };

/// Solution of the fixed-barrier stopping problem: repurchase at reference
/// level kappa, forced close-out at the barrier kappa + c, recall at rate
/// lambda, discounting at r. Immutable once constructed.
struct SimplerSolution {
    double kappa = 1.0;
    ModelParams params;
    Regime regime = Regime::A;
    double z_star = 0.0;  ///< optimal repurchase threshold in [0, kappa + c]
    double coef_A = 0.0;  ///< decreasing-solution coefficient (regime A diagnostics)
    double coef_B = 0.0;  ///< increasing-solution coefficient (regime A diagnostics)
    ValueKind value_kind = ValueKind::ImmediatePayoff;
};

/// Dispatches on the parameter regime: interior threshold from the root of H
/// (regime A), never stop (regime E, z* = 0), or stop immediately (z* =
/// kappa + c, value identical to the stopping payoff).
SimplerSolution solve_simpler(double kappa, const ModelParams& p);

/// Value function of the solved problem at price x > 0.
double value_simpler(const SimplerSolution& sol, double x);

/// One-sided derivative of the value function, taken from the continuation
/// side at the kink points z* and kappa + c.
double value_simpler_derivative(const SimplerSolution& sol, double x);

/// Second derivative on the continuation region (zero on the stopping payoff).
double value_simpler_second_derivative(const SimplerSolution& sol, double x);

/// Early-exercise premium U(x) = V(x) - (kappa - x); zero on the stopping
/// region, strictly positive inside the continuation interval.
double early_exercise_gap(const SimplerSolution& sol, double x);

/// Expected discounted payoff of the (generally sub-optimal) rule "repurchase
/// at the first passage below z", i.e. the Dirichlet solution that value-
/// matches kappa - z at z and -c at the barrier without smooth pasting.
/// Requires 0 < z < kappa + c.
double threshold_policy_value(double x, double z, double kappa, const ModelParams& p);

} // namespace shortsale
