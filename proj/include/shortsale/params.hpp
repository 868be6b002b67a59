#pragma once

#include "shortsale/errors.hpp"

#include <cmath>
#include <string>

namespace shortsale {

/// Market and constraint parameters of the close-out model. Rates are per
/// year, sigma per sqrt-year, c in currency units. Defaults are the base
/// scenario used throughout the comparative statics.
struct ModelParams {
    double mu = -0.02;    ///< drift rate of the stock price
    double sigma = 0.30;  ///< volatility, > 0
    double r = 0.05;      ///< discount rate, >= 0
    double lambda = 0.01; ///< recall intensity, >= 0 with lambda + r > 0
    double c = 50.0;      ///< collateral budget, >= 0

    /// nu = mu/sigma^2 - 1/2, recomputed on demand so it can never go stale.
    double nu() const { return mu / (sigma * sigma) - 0.5; }

    void validate() const {
        if (!(std::isfinite(mu) && std::isfinite(sigma) && std::isfinite(r) &&
              std::isfinite(lambda) && std::isfinite(c)))
            throw InvalidArgument("ModelParams: all parameters must be finite");
        if (!(sigma > 0.0)) throw InvalidArgument("ModelParams: sigma must be > 0");
        if (r < 0.0) throw InvalidArgument("ModelParams: r must be >= 0");
        if (lambda < 0.0) throw InvalidArgument("ModelParams: lambda must be >= 0");
        if (!(lambda + r > 0.0))
            throw InvalidArgument("ModelParams: lambda + r must be > 0");
        if (c < 0.0) throw InvalidArgument("ModelParams: c must be >= 0");
    }
};

} // namespace shortsale
