#include "shortsale/boundary.hpp"

#include "shortsale/errors.hpp"
#include "shortsale/gbm.hpp"

#include <cmath>

namespace shortsale {

namespace {

void check_price(double x, const char* name) {
    if (!(x > 0.0) || !std::isfinite(x))
        throw InvalidArgument(std::string(name) + " must be positive and finite");
}

// Continuation-region evaluation for an arbitrary threshold z in (0, a),
// a = kappa + c, in the two-ratio form
//   V(x) = (kappa - z - v(z)) g(a,x)/g(a,z) + (c + v(a)) g(z,x)/g(a,z) + v(x)
// with g(u,w) = phi(u) psi(w) - phi(w) psi(u). Every ratio is reduced to
// bounded factors (z/x)^(s+nu), (x/a)^(s-nu), (x/a)^(2s), (z/x)^(2s) so large
// barriers cannot overflow or cancel catastrophically.
struct ContinuationEval {
    double value;
    double d1;
    double d2;
};

ContinuationEval eval_continuation(double x, double z, double kappa, const ModelParams& p) {
    const double alpha = p.lambda + p.r;
    const double s = exponent_scale(alpha, p);
    const double nu = p.nu();
    const double a = kappa + p.c;
    const double log_x = std::log(x), log_z = std::log(z), log_a = std::log(a);

    const double c1 = kappa - z - particular_solution(z, kappa, p);
    const double c2 = p.c + particular_solution(a, kappa, p);

    // E(y) = 1 - (y/a)^(2s), in (0, 1) for y < a.
    const double Ez = -std::expm1(2.0 * s * (log_z - log_a));
    const double Ex = -std::expm1(2.0 * s * (log_x - log_a));
    const double E2x = -std::expm1(2.0 * s * (log_z - log_x));
    const double Dx = std::exp(2.0 * s * (log_x - log_a));   // (x/a)^(2s)
    const double D2x = std::exp(2.0 * s * (log_z - log_x));  // (z/x)^(2s)
    const double zp = std::exp((s + nu) * (log_z - log_x));  // (z/x)^(s+nu)
    const double xa = std::exp((s - nu) * (log_x - log_a));  // (x/a)^(s-nu)

    const double r1 = zp * Ex / Ez;
    const double r2 = -xa * E2x / Ez;
    const double r1p = -zp * ((s - nu) * Dx + (s + nu)) / (x * Ez);
    const double r2p = -xa * ((s - nu) + (s + nu) * D2x) / (x * Ez);
    const double r1pp = -zp * ((s - nu) * (s - nu - 1.0) * Dx - (s + nu) * (s + nu + 1.0)) /
                        (x * x * Ez);
    const double r2pp = -xa * ((s - nu) * (s - nu - 1.0) - (s + nu) * (s + nu + 1.0) * D2x) /
                        (x * x * Ez);

    ContinuationEval out;
    out.value = c1 * r1 + c2 * r2 + particular_solution(x, kappa, p);
    out.d1 = c1 * r1p + c2 * r2p + particular_solution_derivative(p);
    out.d2 = c1 * r1pp + c2 * r2pp;
    return out;
}

// Regime E closed form on (0, a): kappa - lambda x/(lambda-mu)
// + mu a/(lambda-mu) (x/a)^(s-nu) at rate lambda.
struct RegimeEEval {
    double value, d1, d2;
};

RegimeEEval eval_regime_e(double x, double kappa, const ModelParams& p) {
    const double s = exponent_scale(p.lambda, p);
    const double nu = p.nu();
    const double a = kappa + p.c;
    const double e = s - nu;
    const double ratio = std::exp(e * (std::log(x) - std::log(a)));  // psi(x)/psi(a)
    const double m = p.mu * a / (p.lambda - p.mu);
    RegimeEEval out;
    out.value = kappa - p.lambda * x / (p.lambda - p.mu) + m * ratio;
    out.d1 = -p.lambda / (p.lambda - p.mu) + m * e * ratio / x;
    out.d2 = m * e * (e - 1.0) * ratio / (x * x);
    return out;
}

} // namespace

SimplerSolution solve_simpler(double kappa, const ModelParams& p) {
    p.validate();
    check_price(kappa, "kappa");
    SimplerSolution sol;
    sol.kappa = kappa;
    sol.params = p;
    sol.regime = classify(kappa, p);
    switch (sol.regime) {
        case Regime::A: {
            const RootReport report = locate_root(kappa, p);
            sol.z_star = *report.root;
            sol.value_kind = ValueKind::PiecewiseRegimeA;
            // Coefficients of the decreasing/increasing solutions, kept for
            // diagnostics; evaluation goes through the ratio form instead.
            const double alpha = p.lambda + p.r;
            const double a = kappa + p.c;
            const double z = sol.z_star;
            const double phi_z = fundamental_solution(SolutionKind::Decreasing, alpha, z, p);
            const double phi_a = fundamental_solution(SolutionKind::Decreasing, alpha, a, p);
            const double psi_z = fundamental_solution(SolutionKind::Increasing, alpha, z, p);
            const double psi_a = fundamental_solution(SolutionKind::Increasing, alpha, a, p);
            const double c1 = kappa - z - particular_solution(z, kappa, p);
            const double c2 = p.c + particular_solution(a, kappa, p);
            const double den = phi_z * psi_a - phi_a * psi_z;
            sol.coef_A = (c1 * psi_a + c2 * psi_z) / den;
            sol.coef_B = (c1 * phi_a + c2 * phi_z) / -den;
            break;
        }
        case Regime::E:
            sol.z_star = 0.0;
            sol.value_kind = ValueKind::ClosedFormRegimeE;
            break;
        default:
            sol.z_star = kappa + p.c;
            sol.value_kind = ValueKind::ImmediatePayoff;
            break;
    }
    return sol;
}

double value_simpler(const SimplerSolution& sol, double x) {
    check_price(x, "x");
    const double a = sol.kappa + sol.params.c;
    switch (sol.value_kind) {
        case ValueKind::PiecewiseRegimeA:
            if (x <= sol.z_star || x >= a) return sol.kappa - x;
            return eval_continuation(x, sol.z_star, sol.kappa, sol.params).value;
        case ValueKind::ClosedFormRegimeE:
            if (x >= a) return sol.kappa - x;
            return eval_regime_e(x, sol.kappa, sol.params).value;
        case ValueKind::ImmediatePayoff:
        default:
            return sol.kappa - x;
    }
}

double value_simpler_derivative(const SimplerSolution& sol, double x) {
    check_price(x, "x");
    const double a = sol.kappa + sol.params.c;
    switch (sol.value_kind) {
        case ValueKind::PiecewiseRegimeA:
            if (x < sol.z_star || x > a) return -1.0;
            return eval_continuation(x, sol.z_star, sol.kappa, sol.params).d1;
        case ValueKind::ClosedFormRegimeE:
            if (x > a) return -1.0;
            return eval_regime_e(x, sol.kappa, sol.params).d1;
        case ValueKind::ImmediatePayoff:
        default:
            return -1.0;
    }
}

double value_simpler_second_derivative(const SimplerSolution& sol, double x) {
    check_price(x, "x");
    const double a = sol.kappa + sol.params.c;
    switch (sol.value_kind) {
        case ValueKind::PiecewiseRegimeA:
            if (x < sol.z_star || x > a) return 0.0;
            return eval_continuation(x, sol.z_star, sol.kappa, sol.params).d2;
        case ValueKind::ClosedFormRegimeE:
            if (x > a) return 0.0;
            return eval_regime_e(x, sol.kappa, sol.params).d2;
        case ValueKind::ImmediatePayoff:
        default:
            return 0.0;
    }
}

double early_exercise_gap(const SimplerSolution& sol, double x) {
    return value_simpler(sol, x) - (sol.kappa - x);
}

double threshold_policy_value(double x, double z, double kappa, const ModelParams& p) {
    p.validate();
    check_price(x, "x");
    check_price(z, "z");
    check_price(kappa, "kappa");
    const double a = kappa + p.c;
    if (!(z < a)) throw InvalidArgument("threshold must lie below the barrier");
    if (x <= z || x >= a) return kappa - x;
    return eval_continuation(x, z, kappa, p).value;
}

} // namespace shortsale
