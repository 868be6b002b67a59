#include "shortsale/statics.hpp"

#include "shortsale/errors.hpp"

#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <sstream>
#include <string>
#include <vector>

using namespace shortsale;

namespace {

ModelParams make(double mu, double sigma, double r, double lambda, double c = 50.0) {
    ModelParams p;
    p.mu = mu;
    p.sigma = sigma;
    p.r = r;
    p.lambda = lambda;
    p.c = c;
    return p;
}

SweepSpec lambda_sweep(double mu, int steps = 11) {
    SweepSpec spec;
    spec.vary = SweepParam::Lambda;
    spec.from = 0.0;
    spec.to = 0.1;
    spec.steps = steps;
    spec.base = make(mu, 0.3, 0.05, 0.01);
    spec.x0 = 1.0;
    return spec;
}

std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
    return lines;
}

} // namespace

TEST_CASE("drift misestimation probability") {
    CHECK(drift_misestimation(0.04, 0.3, 100.0) ==
          doctest::Approx(0.09121121972586787).epsilon(1e-12));
    CHECK(drift_misestimation(0.0, 0.3, 100.0) == 0.5);
    // negative drift: above one half and increasing toward certainty with T
    double prev = 0.5;
    for (double T : {1.0, 25.0, 100.0, 2500.0}) {
        const double prob = drift_misestimation(-0.04, 0.3, T);
        CHECK(prob > prev);
        prev = prob;
    }
    CHECK(prev > 0.999);
    CHECK_THROWS_AS(drift_misestimation(0.04, 0.0, 100.0), InvalidArgument);
    CHECK_THROWS_AS(drift_misestimation(0.04, 0.3, 0.0), InvalidArgument);
}

TEST_CASE("recall-intensity sweep reproduces the anchor rows") {
    const auto rows = run_sweep(lambda_sweep(-0.02));
    REQUIRE(rows.size() == 11);
    CHECK(rows.front().param_value == 0.0);
    CHECK(rows.back().param_value == 0.1);
    CHECK(rows.front().z_constrained == doctest::Approx(0.36126805223867636).epsilon(1e-9));
    CHECK(rows.front().z_unconstrained == doctest::Approx(0.35714285714285716).epsilon(1e-12));
    CHECK(rows.back().z_constrained == doctest::Approx(0.4485841443116253).epsilon(1e-9));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CHECK(rows[i].param_value == doctest::Approx(0.01 * i).epsilon(1e-12));
        CHECK(rows[i].z_constrained >= rows[i].z_unconstrained - 1e-12);
        CHECK(rows[i].v_constrained <= rows[i].v_unconstrained + 1e-12);
        CHECK_FALSE(rows[i].immediate_close);
        // the unconstrained leg ignores the recall intensity
        CHECK(rows[i].z_unconstrained == rows.front().z_unconstrained);
    }
}

TEST_CASE("collateral sweep: immediate close-out below the budget cutoff") {
    SweepSpec spec;
    spec.vary = SweepParam::C;
    spec.from = 0.0;
    spec.to = 100.0;
    spec.steps = 26;  // grid spacing 4
    spec.base = make(0.02, 0.3, 0.05, 0.01);
    const auto rows = run_sweep(spec);
    for (const auto& row : rows) {
        if (row.param_value <= 4.0)
            CHECK(row.immediate_close);
        else
            CHECK_FALSE(row.immediate_close);
    }
}

TEST_CASE("rate sweep under positive drift: waiting pays only for high rates") {
    SweepSpec spec;
    spec.vary = SweepParam::R;
    spec.from = 0.0;
    spec.to = 0.1;
    spec.steps = 11;
    spec.base = make(0.02, 0.3, 0.05, 0.01);
    const auto rows = run_sweep(spec);
    for (const auto& row : rows) {
        if (row.param_value <= 0.03 + 1e-12)
            CHECK(row.immediate_close);
        else
            CHECK_FALSE(row.immediate_close);
    }
}

TEST_CASE("sweep rows are independent of the worker count") {
    SweepSpec spec = lambda_sweep(-0.02, 31);
    spec.threads = 1;
    const auto serial = run_sweep(spec);
    spec.threads = 4;
    const auto parallel = run_sweep(spec);
    REQUIRE(serial.size() == parallel.size());
    for (std::size_t i = 0; i < serial.size(); ++i) {
        CHECK(serial[i].param_value == parallel[i].param_value);
        CHECK(serial[i].z_constrained == parallel[i].z_constrained);
        CHECK(serial[i].v_constrained == parallel[i].v_constrained);
        CHECK(serial[i].z_unconstrained == parallel[i].z_unconstrained);
        CHECK(serial[i].v_unconstrained == parallel[i].v_unconstrained);
    }
}

TEST_CASE("CSV output: exact header, full-precision round trip, determinism") {
    const SweepSpec spec = lambda_sweep(-0.02, 3);
    const auto rows = run_sweep(spec);
    std::ostringstream a, b;
    emit_csv(rows, spec, a);
    emit_csv(rows, spec, b);
    CHECK(a.str() == b.str());

    const auto lines = split_lines(a.str());
    REQUIRE(lines.size() == 4);  // header + 3 rows
    CHECK(lines[0] ==
          "param,value,regime,z_constrained,v_constrained,z_unconstrained,"
          "v_unconstrained,immediate_close");
    // full-precision round trip of the first data row
    std::istringstream row(lines[1]);
    std::string field;
    std::getline(row, field, ',');
    CHECK(field == "lambda");
    std::getline(row, field, ',');
    CHECK(std::strtod(field.c_str(), nullptr) == rows[0].param_value);
    std::getline(row, field, ',');
    CHECK(field == std::string(1, regime_letter(rows[0].regime)));
    std::getline(row, field, ',');
    CHECK(std::strtod(field.c_str(), nullptr) == rows[0].z_constrained);
    std::getline(row, field, ',');
    CHECK(std::strtod(field.c_str(), nullptr) == rows[0].v_constrained);
    std::getline(row, field, ',');
    CHECK(std::strtod(field.c_str(), nullptr) == rows[0].z_unconstrained);
    std::getline(row, field, ',');
    CHECK(std::strtod(field.c_str(), nullptr) == rows[0].v_unconstrained);
}

TEST_CASE("SVG output: deterministic, two panels, flat unconstrained threshold") {
    const SweepSpec spec = lambda_sweep(-0.02);
    const auto rows = run_sweep(spec);
    // series equality before rendering: recall leaves the unconstrained
    // threshold untouched
    for (const auto& row : rows) CHECK(row.z_unconstrained == rows[0].z_unconstrained);

    std::ostringstream a, b;
    emit_svg(rows, spec, a);
    emit_svg(rows, spec, b);
    CHECK(a.str() == b.str());
    const std::string svg = a.str();
    CHECK(svg.find("<svg") != std::string::npos);
    std::size_t polylines = 0;
    for (std::size_t pos = svg.find("<polyline"); pos != std::string::npos;
         pos = svg.find("<polyline", pos + 1))
        ++polylines;
    CHECK(polylines == 4);
}

TEST_CASE("sweep validation rejects bad grids") {
    SweepSpec spec = lambda_sweep(-0.02);
    spec.steps = 1;
    CHECK_THROWS_AS(run_sweep(spec), InvalidArgument);

    spec = lambda_sweep(-0.02);
    spec.from = 0.2;
    spec.to = 0.1;
    CHECK_THROWS_AS(run_sweep(spec), InvalidArgument);

    SweepSpec sigma_zero;
    sigma_zero.vary = SweepParam::Sigma;
    sigma_zero.from = 0.0;
    sigma_zero.to = 0.5;
    sigma_zero.steps = 5;
    sigma_zero.base = make(-0.02, 0.3, 0.05, 0.01);
    CHECK_THROWS_AS(run_sweep(sigma_zero), InvalidArgument);

    // recall sweep down to zero intensity requires a positive discount rate
    SweepSpec dead = lambda_sweep(-0.02);
    dead.base.r = 0.0;
    CHECK_THROWS_AS(run_sweep(dead), InvalidArgument);

    const std::vector<SweepRow> empty;
    std::ostringstream out;
    CHECK_THROWS_AS(emit_csv(empty, lambda_sweep(-0.02), out), InvalidArgument);
}
