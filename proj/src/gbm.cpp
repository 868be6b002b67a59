#include "shortsale/gbm.hpp"

#include <cmath>
#include <string>

namespace shortsale {

namespace {

void check_positive(double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v))
        throw InvalidArgument(std::string(name) + " must be positive and finite");
}

// x^e evaluated as exp(e ln x); keeps intermediate magnitudes tame when
// callers combine exponents before exponentiating.
double pow_log(double x, double e) { return std::exp(e * std::log(x)); }

} // namespace

double exponent_scale(double alpha, const ModelParams& p) {
    p.validate();
    check_positive(alpha, "alpha");
    const double nu = p.nu();
    return std::sqrt(nu * nu + 2.0 * alpha / (p.sigma * p.sigma));
}

double fundamental_solution(SolutionKind kind, double alpha, double x, const ModelParams& p) {
    const double s = exponent_scale(alpha, p);
    check_positive(x, "x");
    const double nu = p.nu();
    const double e = kind == SolutionKind::Decreasing ? -s - nu : s - nu;
    return pow_log(x, e);
}

double fundamental_solution_derivative(SolutionKind kind, double alpha, double x,
                                       const ModelParams& p) {
    const double s = exponent_scale(alpha, p);
    check_positive(x, "x");
    const double nu = p.nu();
    const double e = kind == SolutionKind::Decreasing ? -s - nu : s - nu;
    return e * pow_log(x, e) / x;
}

double wronskian(double alpha, const ModelParams& p) { return 2.0 * exponent_scale(alpha, p); }

double scale_derivative(double x, const ModelParams& p) {
    p.validate();
    check_positive(x, "x");
    return pow_log(x, -2.0 * p.nu() - 1.0);
}

double hitting_laplace(Direction direction, double x, double z, double alpha,
                       const ModelParams& p) {
    const double s = exponent_scale(alpha, p);
    check_positive(x, "x");
    check_positive(z, "z");
    const double nu = p.nu();
    if (direction == Direction::Up) {
        if (x >= z) return 1.0;
        // psi(x)/psi(z) = (x/z)^(s-nu), combined in log space
        return std::exp((s - nu) * (std::log(x) - std::log(z)));
    }
    if (x <= z) return 1.0;
    return std::exp((s + nu) * (std::log(z) - std::log(x)));
}

namespace {

double checked_resolvent_denominator(const ModelParams& p) {
    const double denom = p.lambda + p.r - p.mu;
    if (std::abs(denom) < 1e-12 * std::max(1.0, p.lambda + p.r))
        throw SingularParameter("particular solution undefined: lambda + r - mu ~ 0");
    return denom;
}

} // namespace

double particular_solution(double x, double kappa, const ModelParams& p) {
    p.validate();
    check_positive(x, "x");
    check_positive(kappa, "kappa");
    return p.lambda * kappa / (p.lambda + p.r) - p.lambda * x / checked_resolvent_denominator(p);
}

double particular_solution_derivative(const ModelParams& p) {
    p.validate();
    return -p.lambda / checked_resolvent_denominator(p);
}

} // namespace shortsale
