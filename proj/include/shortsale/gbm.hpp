#pragma once

#include "shortsale/params.hpp"

namespace shortsale {

/// Selects one of the two fundamental solutions of the killed-generator ODE
/// (1/2) sigma^2 x^2 u'' + mu x u' = alpha u: the strictly decreasing branch
/// x^(-s-nu) or the strictly increasing branch x^(s-nu), s = sqrt(nu^2 +
/// 2 alpha / sigma^2).
enum class SolutionKind { Decreasing, Increasing };

enum class Direction { Up, Down };

/// Exponent magnitude s = sqrt(nu^2 + 2 alpha / sigma^2) shared by the two
/// fundamental solutions. Requires alpha > 0.
double exponent_scale(double alpha, const ModelParams& p);

/// phi_alpha(x) or psi_alpha(x); strictly positive.
double fundamental_solution(SolutionKind kind, double alpha, double x, const ModelParams& p);

/// d/dx of the corresponding fundamental solution: -(s+nu) phi/x, (s-nu) psi/x.
double fundamental_solution_derivative(SolutionKind kind, double alpha, double x,
                                       const ModelParams& p);

/// Wronskian (phi psi' - phi' psi) / s'(x) = 2 s; independent of x.
double wronskian(double alpha, const ModelParams& p);

/// Derivative of the scale function, s'(x) = x^(-2 nu - 1).
double scale_derivative(double x, const ModelParams& p);

/// Laplace transform E_x[exp(-alpha tau)] of the first passage time to z from
/// x, upward or downward. Equals 1 when the level is already crossed and lies
/// in (0, 1] otherwise.
double hitting_laplace(Direction direction, double x, double z, double alpha,
                       const ModelParams& p);

/// Particular solution of the inhomogeneous equation
/// L_X v - (lambda + r) v + lambda (kappa - x) = 0:
/// v(x) = lambda kappa / (lambda + r) - lambda x / (lambda + r - mu).
/// Throws SingularParameter when lambda + r - mu is too close to zero.
double particular_solution(double x, double kappa, const ModelParams& p);

/// x-derivative of the particular solution, -lambda / (lambda + r - mu).
double particular_solution_derivative(const ModelParams& p);

} // namespace shortsale
