#pragma once

#include "shortsale/closeout.hpp"
#include "shortsale/params.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace shortsale {

enum class SweepParam { Mu, Sigma, R, Lambda, C };

const char* sweep_param_name(SweepParam param);

struct SweepSpec {
    SweepParam vary = SweepParam::Mu;
    double from = 0.0;
    double to = 1.0;
    int steps = 2;  ///< grid points, endpoints inclusive
    ModelParams base;
    double x0 = 1.0;
    int threads = 0;  ///< 0 = hardware concurrency; output independent of it

    void validate() const;
};

struct SweepRow {
    double param_value = 0.0;
    Regime regime = Regime::A;
    double z_constrained = 0.0;
    double v_constrained = 0.0;
    double z_unconstrained = 0.0;
    double v_unconstrained = 0.0;
    bool immediate_close = false;
};

/// Solves the close-out problem on an equally spaced grid over the varied
/// parameter. Rows are ordered by grid value; a solver failure aborts with a
/// diagnostic naming the offending grid point.
std::vector<SweepRow> run_sweep(const SweepSpec& spec);

/// CSV with header
/// param,value,regime,z_constrained,v_constrained,z_unconstrained,v_unconstrained,immediate_close
/// and 17-significant-digit values; byte output is deterministic.
void emit_csv(const std::vector<SweepRow>& rows, const SweepSpec& spec, std::ostream& out);
void emit_csv(const std::vector<SweepRow>& rows, const SweepSpec& spec,
              const std::string& path);

/// Self-contained two-panel SVG line chart (threshold on the left, value on
/// the right; constrained solid red, unconstrained dashed blue) with
/// deterministic bytes for identical inputs.
void emit_svg(const std::vector<SweepRow>& rows, const SweepSpec& spec, std::ostream& out);
void emit_svg(const std::vector<SweepRow>& rows, const SweepSpec& spec,
              const std::string& path);

/// Probability that the maximum-likelihood drift estimate from T years of
/// observations is non-positive when the true drift is mu: Phi(-mu sqrt(T) /
/// sigma).
double drift_misestimation(double mu, double sigma, double T);

} // namespace shortsale
