#include "shortsale/statics.hpp"

#include "shortsale/errors.hpp"
#include "shortsale/normal.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <fstream>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

namespace shortsale {

namespace {

std::string format_double(double v, int precision = 17) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, precision);
    return std::string(buf, res.ptr);
}

std::string format_fixed(double v, int precision) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::fixed, precision);
    return std::string(buf, res.ptr);
}

ModelParams with_param(const ModelParams& base, SweepParam which, double value) {
    ModelParams p = base;
    switch (which) {
        case SweepParam::Mu: p.mu = value; break;
        case SweepParam::Sigma: p.sigma = value; break;
        case SweepParam::R: p.r = value; break;
        case SweepParam::Lambda: p.lambda = value; break;
        case SweepParam::C: p.c = value; break;
    }
    return p;
}

} // namespace

const char* sweep_param_name(SweepParam param) {
    switch (param) {
        case SweepParam::Mu: return "mu";
        case SweepParam::Sigma: return "sigma";
        case SweepParam::R: return "r";
        case SweepParam::Lambda: return "lambda";
        case SweepParam::C: return "c";
    }
    return "?";
}

void SweepSpec::validate() const {
    base.validate();
    if (!(x0 > 0.0) || !std::isfinite(x0))
        throw InvalidArgument("SweepSpec: x0 must be positive and finite");
    if (steps < 2) throw InvalidArgument("SweepSpec: steps must be >= 2");
    if (!(from < to) || !std::isfinite(from) || !std::isfinite(to))
        throw InvalidArgument("SweepSpec: need finite from < to");
    if (threads < 0) throw InvalidArgument("SweepSpec: threads must be >= 0");
    // The whole range must stay in the varied parameter's domain.
    with_param(base, vary, from).validate();
    with_param(base, vary, to).validate();
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec) {
    spec.validate();
    const int n = spec.steps;
    std::vector<SweepRow> rows(static_cast<std::size_t>(n));
    std::atomic<int> next{0};
    std::atomic<bool> failed{false};
    std::string error_message;
    std::mutex error_mutex;

    auto eval_point = [&](int i) {
        const double value = i == n - 1
                                 ? spec.to
                                 : spec.from + (spec.to - spec.from) * static_cast<double>(i) /
                                                   static_cast<double>(n - 1);
        try {
            const ModelParams p = with_param(spec.base, spec.vary, value);
            const ShortSaleSolution sol = solve(spec.x0, p);
            SweepRow row;
            row.param_value = value;
            row.regime = sol.regime;
            row.z_constrained = sol.constrained_z;
            row.v_constrained = sol.constrained_value;
            row.z_unconstrained = sol.unconstrained_z;
            row.v_unconstrained = sol.unconstrained_value;
            row.immediate_close = sol.immediate_close;
            rows[static_cast<std::size_t>(i)] = row;
        } catch (const std::exception& e) {
            std::lock_guard<std::mutex> lock(error_mutex);
            if (!failed.exchange(true)) {
                std::ostringstream msg;
                msg << "sweep failed at " << sweep_param_name(spec.vary) << " = "
                    << format_double(value) << ": " << e.what();
                error_message = msg.str();
            }
        }
    };

    unsigned workers = spec.threads > 0 ? static_cast<unsigned>(spec.threads)
                                        : std::max(1u, std::thread::hardware_concurrency());
    workers = std::min<unsigned>(workers, static_cast<unsigned>(n));
    if (workers <= 1) {
        for (int i = 0; i < n && !failed.load(); ++i) eval_point(i);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
                    if (failed.load()) return;
                    eval_point(i);
                }
            });
        for (auto& th : pool) th.join();
    }
    if (failed.load()) throw ConvergenceFailure(error_message);
    return rows;
}

void emit_csv(const std::vector<SweepRow>& rows, const SweepSpec& spec, std::ostream& out) {
    if (rows.empty()) throw InvalidArgument("emit_csv: no rows");
    const char* name = sweep_param_name(spec.vary);
    out << "param,value,regime,z_constrained,v_constrained,z_unconstrained,"
           "v_unconstrained,immediate_close\n";
    for (const SweepRow& row : rows) {
        out << name << ',' << format_double(row.param_value) << ','
            << regime_letter(row.regime) << ',' << format_double(row.z_constrained) << ','
            << format_double(row.v_constrained) << ',' << format_double(row.z_unconstrained)
            << ',' << format_double(row.v_unconstrained) << ','
            << (row.immediate_close ? '1' : '0') << '\n';
    }
}

void emit_csv(const std::vector<SweepRow>& rows, const SweepSpec& spec,
              const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InvalidArgument("emit_csv: cannot open " + path);
    emit_csv(rows, spec, out);
    out.flush();
    if (!out) throw InvalidArgument("emit_csv: write failed for " + path);
}

namespace {

struct Series {
    const char* label;
    const char* color;
    bool dashed;
    std::vector<double> y;
};

void draw_panel(std::ostream& out, double ox, const char* title, const SweepSpec& spec,
                const std::vector<SweepRow>& rows, const std::vector<Series>& series) {
    constexpr double w = 380.0, h = 280.0;
    double ymin = series[0].y[0], ymax = ymin;
    for (const auto& s : series)
        for (double v : s.y) {
            ymin = std::min(ymin, v);
            ymax = std::max(ymax, v);
        }
    if (ymax - ymin < 1e-12) {
        ymax += 0.5;
        ymin -= 0.5;
    }
    const double pad = 0.05 * (ymax - ymin);
    ymin -= pad;
    ymax += pad;
    const double x0 = rows.front().param_value, x1 = rows.back().param_value;

    auto sx = [&](double x) { return ox + (x - x0) / (x1 - x0) * w; };
    auto sy = [&](double y) { return 30.0 + (ymax - y) / (ymax - ymin) * h; };

    out << "<rect x=\"" << format_fixed(ox, 2) << "\" y=\"30\" width=\"" << format_fixed(w, 2)
        << "\" height=\"" << format_fixed(h, 2)
        << "\" fill=\"none\" stroke=\"#888\" stroke-width=\"1\"/>\n";
    out << "<text x=\"" << format_fixed(ox + w / 2, 2)
        << "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">" << title << "</text>\n";
    out << "<text x=\"" << format_fixed(ox + w / 2, 2) << "\" y=\"" << format_fixed(h + 60, 2)
        << "\" text-anchor=\"middle\" font-size=\"12\">" << sweep_param_name(spec.vary)
        << "</text>\n";
    // axis extremes
    out << "<text x=\"" << format_fixed(ox - 4, 2)
        << "\" y=\"34\" text-anchor=\"end\" font-size=\"10\">" << format_fixed(ymax, 4)
        << "</text>\n";
    out << "<text x=\"" << format_fixed(ox - 4, 2) << "\" y=\"" << format_fixed(h + 30, 2)
        << "\" text-anchor=\"end\" font-size=\"10\">" << format_fixed(ymin, 4) << "</text>\n";
    out << "<text x=\"" << format_fixed(ox, 2) << "\" y=\"" << format_fixed(h + 44, 2)
        << "\" text-anchor=\"middle\" font-size=\"10\">" << format_fixed(x0, 4) << "</text>\n";
    out << "<text x=\"" << format_fixed(ox + w, 2) << "\" y=\"" << format_fixed(h + 44, 2)
        << "\" text-anchor=\"middle\" font-size=\"10\">" << format_fixed(x1, 4) << "</text>\n";

    for (const auto& s : series) {
        out << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\"";
        if (s.dashed) out << " stroke-dasharray=\"6 3\"";
        out << " points=\"";
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (i) out << ' ';
            out << format_fixed(sx(rows[i].param_value), 3) << ','
                << format_fixed(sy(s.y[i]), 3);
        }
        out << "\"/>\n";
    }
}

} // namespace

void emit_svg(const std::vector<SweepRow>& rows, const SweepSpec& spec, std::ostream& out) {
    if (rows.empty()) throw InvalidArgument("emit_svg: no rows");
    auto column = [&](double SweepRow::* member) {
        std::vector<double> v;
        v.reserve(rows.size());
        for (const auto& row : rows) v.push_back(row.*member);
        return v;
    };
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"900\" height=\"380\" "
           "viewBox=\"0 0 900 380\" font-family=\"sans-serif\">\n";
    std::vector<Series> thresholds{
        {"constrained", "#cc2222", false, column(&SweepRow::z_constrained)},
        {"unconstrained", "#2244cc", true, column(&SweepRow::z_unconstrained)}};
    std::vector<Series> values{
        {"constrained", "#cc2222", false, column(&SweepRow::v_constrained)},
        {"unconstrained", "#2244cc", true, column(&SweepRow::v_unconstrained)}};
    draw_panel(out, 60.0, "repurchase threshold", spec, rows, thresholds);
    draw_panel(out, 500.0, "value", spec, rows, values);
    out << "<g font-size=\"11\">"
           "<line x1=\"640\" y1=\"368\" x2=\"670\" y2=\"368\" stroke=\"#cc2222\" "
           "stroke-width=\"1.5\"/><text x=\"675\" y=\"372\">constrained</text>"
           "<line x1=\"760\" y1=\"368\" x2=\"790\" y2=\"368\" stroke=\"#2244cc\" "
           "stroke-width=\"1.5\" stroke-dasharray=\"6 3\"/><text x=\"795\" "
           "y=\"372\">unconstrained</text></g>\n";
    out << "</svg>\n";
}

void emit_svg(const std::vector<SweepRow>& rows, const SweepSpec& spec,
              const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InvalidArgument("emit_svg: cannot open " + path);
    emit_svg(rows, spec, out);
    out.flush();
    if (!out) throw InvalidArgument("emit_svg: write failed for " + path);
}

double drift_misestimation(double mu, double sigma, double T) {
    if (!(sigma > 0.0) || !std::isfinite(sigma))
        throw InvalidArgument("drift_misestimation: sigma must be > 0");
    if (!(T > 0.0) || !std::isfinite(T))
        throw InvalidArgument("drift_misestimation: T must be > 0");
    if (!std::isfinite(mu)) throw InvalidArgument("drift_misestimation: mu must be finite");
    return normal_cdf(-mu * std::sqrt(T) / sigma);
}

} // namespace shortsale
