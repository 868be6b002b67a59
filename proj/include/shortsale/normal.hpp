#pragma once

namespace shortsale {

/// Standard normal CDF via the complementary error function; accurate to a
/// few ulp over the full double range.
double normal_cdf(double x);

/// Standard normal quantile, Wichura's PPND16 rational approximation
/// (algorithm AS 241), |error| < 1e-15 for u in (0, 1).
double normal_quantile(double u);

} // namespace shortsale
