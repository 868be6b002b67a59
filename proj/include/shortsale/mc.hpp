#pragma once

#include "shortsale/gbm.hpp"
#include "shortsale/params.hpp"

#include <cstdint>

namespace shortsale {

enum class McEstimator { KilledDiscount, IntegralForm };

struct McConfig {
    std::int64_t n_paths = 200000;
    double dt = 1.0 / 3650.0;  ///< finest simulation step, years
    double horizon = 200.0;    ///< truncation horizon, years
    std::uint64_t seed = 0;
    McEstimator estimator = McEstimator::KilledDiscount;
    bool bridge_correction = true;  ///< Brownian-bridge crossing checks on base steps
    int threads = 0;                ///< worker count, 0 = hardware concurrency

    void validate() const;
};

struct McEstimate {
    double mean = 0.0;
    double std_error = 0.0;  ///< sample standard deviation / sqrt(n_paths)
    std::int64_t n_paths = 0;
    double truncated_fraction = 0.0;  ///< share of paths alive at the horizon
};

/// Monte Carlo estimate of the close-out objective
///   E_x0[ e^{-r (tau_z ^ zeta ^ rho)} (x0 - X) ]
/// under the threshold rule "repurchase at the first passage below z", with
/// knock-out at x0 + c and recall at rate lambda. Requires 0 <= z <= x0;
/// z = 0 means never repurchase voluntarily.
McEstimate estimate_value(double x0, double z, const ModelParams& p, const McConfig& cfg);

/// Same objective for the fixed-barrier problem: start at x, reference level
/// kappa, barrier kappa + c. Used to verify the auxiliary solver away from
/// x = kappa.
McEstimate estimate_value_simpler(double x, double kappa, double z, const ModelParams& p,
                                  const McConfig& cfg);

/// Estimates E_x[e^{-alpha tau}] for the first passage to z (upward or
/// downward); paths that never reach z before the horizon contribute 0.
/// cfg.estimator is ignored.
McEstimate estimate_hitting_laplace(Direction direction, double x, double z, double alpha,
                                    const ModelParams& p, const McConfig& cfg);

} // namespace shortsale
