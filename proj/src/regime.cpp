#include "shortsale/regime.hpp"

#include "shortsale/errors.hpp"
#include "shortsale/gbm.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace shortsale {

namespace {

constexpr double kEqualityTol = 1e-12;

bool nearly_equal(double a, double b) {
    return std::abs(a - b) <= kEqualityTol * std::max({1.0, std::abs(a), std::abs(b)});
}

bool nearly_zero(double a) { return std::abs(a) <= kEqualityTol; }

struct BoundaryPieces {
    double s;       // sqrt(nu^2 + 2(lambda+r)/sigma^2)
    double nu;
    double Fp;      // F'(z), z-independent
    double Fa;      // F(kappa + c)
    double a;       // kappa + c
    double log_a;
};

BoundaryPieces make_pieces(double kappa, const ModelParams& p) {
    if (!(kappa > 0.0) || !std::isfinite(kappa))
        throw InvalidArgument("kappa must be positive and finite");
    const double alpha = p.lambda + p.r;
    BoundaryPieces b;
    b.s = exponent_scale(alpha, p);
    b.nu = p.nu();
    const double denom = p.lambda + p.r - p.mu;
    if (std::abs(denom) < 1e-12 * std::max(1.0, alpha))
        throw SingularParameter("H undefined: lambda + r - mu ~ 0");
    b.Fp = (p.r - p.mu) / denom;
    b.a = kappa + p.c;
    b.Fa = b.Fp * b.a - p.r * kappa / alpha;
    b.log_a = std::log(b.a);
    return b;
}

double F_of(double z, double kappa, const ModelParams& p, const BoundaryPieces& b) {
    return b.Fp * z - p.r * kappa / (p.lambda + p.r);
}

// G(z)/s'(z) and G'(z)/s'(z) reduce to z (pe - qe) and (s-nu) pe + (s+nu) qe
// with pe = (z/a)^(s+nu) and qe = (a/z)^(s-nu), both finite on (0, a] save
// for the genuine z -> 0 blow-up of qe.
struct GRatios {
    double pe, qe;
    bool qe_overflow;
    bool pe_overflow; // z far above the barrier (regime C bracket expansion)
};

GRatios g_ratios(double z, const BoundaryPieces& b) {
    const double L = std::log(z) - b.log_a;
    GRatios g{0.0, 0.0, false, false};
    const double pe_exp = (b.s + b.nu) * L;
    const double qe_exp = -(b.s - b.nu) * L;
    if (pe_exp > 700.0) {
        g.pe_overflow = true;
        return g;
    }
    if (qe_exp > 700.0) {
        g.qe_overflow = true;
        return g;
    }
    g.pe = std::exp(pe_exp);
    g.qe = std::exp(qe_exp);
    return g;
}

} // namespace

char regime_letter(Regime regime) { return static_cast<char>('A' + static_cast<int>(regime)); }

Regime classify(double kappa, const ModelParams& p) {
    p.validate();
    if (!(kappa > 0.0) || !std::isfinite(kappa))
        throw InvalidArgument("kappa must be positive and finite");
    if (p.r > 0.0 && !nearly_zero(p.r)) {
        const double threshold = p.r * p.c / (kappa + p.c);
        if (nearly_equal(p.mu, threshold)) return Regime::B;
        if (p.mu < threshold) return Regime::A;
        if (p.mu < p.r) return Regime::C;
        return Regime::D;
    }
    if (nearly_zero(p.mu)) return Regime::F;
    return p.mu < 0.0 ? Regime::E : Regime::G;
}

double eval_H(double z, double kappa, const ModelParams& p) {
    p.validate();
    if (!(z > 0.0) || !std::isfinite(z)) throw InvalidArgument("z must be positive and finite");
    const BoundaryPieces b = make_pieces(kappa, p);
    const double F = F_of(z, kappa, p, b);
    const double two_s = 2.0 * b.s;
    // H = Cp pe + Cq qe + F(a) after substituting the power forms of G, G'.
    const double Cp = (b.Fp * z - F * (b.s - b.nu)) / two_s;
    const double Cq = (-b.Fp * z - F * (b.s + b.nu)) / two_s;
    const GRatios g = g_ratios(z, b);
    if (g.qe_overflow) return std::copysign(std::numeric_limits<double>::max(), Cq);
    if (g.pe_overflow) return std::copysign(std::numeric_limits<double>::max(), Cp);
    return Cp * g.pe + Cq * g.qe + b.Fa;
}

double eval_H_prime(double z, double kappa, const ModelParams& p) {
    p.validate();
    if (!(z > 0.0) || !std::isfinite(z)) throw InvalidArgument("z must be positive and finite");
    const BoundaryPieces b = make_pieces(kappa, p);
    const double factor = p.r * kappa + (p.mu - p.r) * z;
    const GRatios g = g_ratios(z, b);
    if (g.qe_overflow)
        return std::copysign(std::numeric_limits<double>::max(), factor * -1.0);
    if (g.pe_overflow)
        return std::copysign(std::numeric_limits<double>::max(), factor);
    return factor * (g.pe - g.qe) / (p.sigma * p.sigma * z * b.s);
}

RootReport locate_root(double kappa, const ModelParams& p) {
    const Regime regime = classify(kappa, p);
    RootReport report{regime, std::nullopt, std::nullopt, std::nullopt};
    if (p.r > 0.0 && p.mu < p.r)
        report.stationary_point = p.r * kappa / (p.r - p.mu);
    if (regime != Regime::A && regime != Regime::C) return report;

    const BoundaryPieces b = make_pieces(kappa, p);
    const double zbar = *report.stationary_point;

    // H is strictly decreasing on the bracketed side of the stationary point,
    // positive at the low end, negative at the high end.
    double lo, hi;
    if (regime == Regime::A) {
        hi = zbar * (1.0 - 1e-12);
        lo = 1e-8 * std::min(b.a, zbar);
        int halvings = 0;
        while (eval_H(lo, kappa, p) <= 0.0) {
            lo *= 0.5;
            if (++halvings > 120)
                throw ConvergenceFailure("no positive H found near the origin");
        }
        if (!(eval_H(hi, kappa, p) < 0.0)) {
            // Root indistinguishable from the stationary point at FP resolution
            // (drift at the classification boundary).
            report.root = hi;
            report.bracket = std::make_pair(lo, hi);
            return report;
        }
    } else {
        lo = zbar;
        if (!(eval_H(lo, kappa, p) > 0.0)) {
            report.root = lo;
            report.bracket = std::make_pair(lo, lo);
            return report;
        }
        hi = zbar;
        int doublings = 0;
        do {
            hi *= 2.0;
            if (++doublings > 100)
                throw ConvergenceFailure("no sign change found above the barrier");
        } while (eval_H(hi, kappa, p) >= 0.0);
    }
    report.bracket = std::make_pair(lo, hi);

    // H is positive at lo and negative at hi in both regimes.
    const double h_tol = 1e-12 * std::abs(b.Fa);
    const double z_tol = 1e-12 * b.a;
    double mid = 0.5 * (lo + hi);
    for (int iter = 0; iter < 200 && hi - lo > z_tol; ++iter) {
        mid = 0.5 * (lo + hi);
        const double h = eval_H(mid, kappa, p);
        if (std::abs(h) <= h_tol) break;
        (h > 0.0 ? lo : hi) = mid;
    }
    // Single Newton polish; keep the bisection point unless it improves.
    const double h_mid = eval_H(mid, kappa, p);
    const double hp_mid = eval_H_prime(mid, kappa, p);
    if (std::isfinite(h_mid) && std::isfinite(hp_mid) && hp_mid != 0.0) {
        const double polished = mid - h_mid / hp_mid;
        if (polished > lo && polished < hi &&
            std::abs(eval_H(polished, kappa, p)) < std::abs(h_mid))
            mid = polished;
    }
    report.root = mid;
    return report;
}

} // namespace shortsale
