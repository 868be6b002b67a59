#pragma once

#include "shortsale/params.hpp"

#include <optional>
#include <utility>

namespace shortsale {

/// The seven qualitatively different parameter regimes of the free-boundary
/// equation H(z) = 0, with barrier at kappa + c. The boundary function H
/// always has a structural root at kappa + c; the tags record where any
/// second root lives and what the stopping rule becomes:
///   A: mu < r c/(kappa+c), r > 0  -- interior root in (0, r kappa/(r-mu))
///   B: mu = r c/(kappa+c), r > 0  -- no second root, stop immediately
///   C: r c/(kappa+c) < mu < r     -- second root beyond the barrier, stop now
///   D: mu >= r > 0                -- no second root, stop now
///   E: mu < 0 = r                 -- no second root, never stop voluntarily
///   F: mu = 0 = r                 -- H identically zero, any rule optimal
///   G: mu > 0 = r                 -- no second root, stop now
enum class Regime { A, B, C, D, E, F, G };

char regime_letter(Regime regime);

/// Total classification of (mu, r) given kappa and c. Equality cases B and F
/// use a relative tolerance of 1e-12; both sides of each boundary share the
/// same stopping rule, so edge misclassification is harmless.
Regime classify(double kappa, const ModelParams& p);

/// The boundary function
///   H(z) = [F'(z) G(z) - F(z) G'(z)] / (w s'(z)) + F(kappa + c),
/// with F(z) = (r - mu) z / (lambda + r - mu) - r kappa / (lambda + r) and
/// G(z) = phi(kappa + c) psi(z) - phi(z) psi(kappa + c) at rate lambda + r.
/// Evaluated in a ratio form that avoids overflowing phi/psi products; the
/// genuinely divergent z -> 0 regime saturates to +-DBL_MAX with the correct
/// sign.
double eval_H(double z, double kappa, const ModelParams& p);

/// H'(z) = (2 / (sigma^2 z^2)) (r kappa + (mu - r) z) G(z) / (w s'(z)).
double eval_H_prime(double z, double kappa, const ModelParams& p);

/// Root location results for H beyond the structural root at kappa + c.
struct RootReport {
    Regime regime;
    std::optional<double> root;                        ///< present iff regime A or C
    std::optional<std::pair<double, double>> bracket;  ///< bisection bracket used
    std::optional<double> stationary_point;            ///< r kappa / (r - mu) when 0 <= mu < r
};

/// Finds the second root of H where one exists (regime A below the barrier,
/// regime C above it, the latter reported for diagnostics only). Bisection on
/// a sign-change bracket, capped at 200 iterations, followed by one Newton
/// polish step.
RootReport locate_root(double kappa, const ModelParams& p);

} // namespace shortsale
