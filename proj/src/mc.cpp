#include "shortsale/mc.hpp"

#include "shortsale/errors.hpp"
#include "shortsale/normal.hpp"
#include "shortsale/rng.hpp"

#include <atomic>
#include <cmath>
#include <functional>
#include <limits>
#include <thread>
#include <vector>

namespace shortsale {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Aggregated steps are limited so that a 6-sigma move stays inside both
// boundaries, and additionally capped in wall-clock time so that the
// end-of-step timestamp used for bridge-detected crossings stays close to the
// true crossing time.
constexpr double kAggregationSigmas = 6.0;
constexpr double kMaxAggregatedYears = 0.25;

// Bridge crossing checks with log-probability below this are skipped without
// consuming a uniform.
constexpr double kBridgeLogCutoff = -45.0;

struct PathResult {
    double value = 0.0;
    bool truncated = false;
};

// Deterministic block-sharded reduction: per-path substreams keyed by path
// index, block sums combined in index order, so the estimate is bit-identical
// for any worker count.
McEstimate run_paths(const McConfig& cfg,
                     const std::function<PathResult(Xoshiro256pp&)>& simulate) {
    constexpr std::int64_t kBlock = 1024;
    const std::int64_t n = cfg.n_paths;
    const std::int64_t n_blocks = (n + kBlock - 1) / kBlock;

    struct BlockStats {
        double sum = 0.0, sumsq = 0.0;
        std::int64_t truncated = 0;
    };
    std::vector<BlockStats> blocks(static_cast<std::size_t>(n_blocks));

    auto run_block = [&](std::int64_t b) {
        BlockStats stats;
        const std::int64_t begin = b * kBlock;
        const std::int64_t end = std::min(begin + kBlock, n);
        for (std::int64_t i = begin; i < end; ++i) {
            Xoshiro256pp rng(cfg.seed, static_cast<std::uint64_t>(i));
            const PathResult res = simulate(rng);
            stats.sum += res.value;
            stats.sumsq += res.value * res.value;
            stats.truncated += res.truncated ? 1 : 0;
        }
        blocks[static_cast<std::size_t>(b)] = stats;
    };

    unsigned workers = cfg.threads > 0 ? static_cast<unsigned>(cfg.threads)
                                       : std::max(1u, std::thread::hardware_concurrency());
    workers = std::min<unsigned>(workers, static_cast<unsigned>(n_blocks));
    if (workers <= 1) {
        for (std::int64_t b = 0; b < n_blocks; ++b) run_block(b);
    } else {
        std::atomic<std::int64_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (std::int64_t b = next.fetch_add(1); b < n_blocks; b = next.fetch_add(1))
                    run_block(b);
            });
        for (auto& th : pool) th.join();
    }

    double sum = 0.0, sumsq = 0.0;
    std::int64_t truncated = 0;
    for (const auto& st : blocks) {
        sum += st.sum;
        sumsq += st.sumsq;
        truncated += st.truncated;
    }
    McEstimate est;
    est.n_paths = n;
    est.mean = sum / static_cast<double>(n);
    if (n > 1) {
        const double var = std::max(0.0, (sumsq - static_cast<double>(n) * est.mean * est.mean) /
                                             static_cast<double>(n - 1));
        est.std_error = std::sqrt(var / static_cast<double>(n));
    }
    est.truncated_fraction = static_cast<double>(truncated) / static_cast<double>(n);
    return est;
}

McEstimate certain_value(double value, const McConfig& cfg) {
    McEstimate est;
    est.mean = value;
    est.std_error = 0.0;
    est.n_paths = cfg.n_paths;
    est.truncated_fraction = 0.0;
    return est;
}

struct KilledContext {
    double log_x, log_barrier, log_threshold;  // log_threshold = -inf when z = 0
    double barrier_level, threshold_level, kappa;
    double drift, sigma, sigma_sq, r, lambda;
    double dt, horizon;
    std::int64_t max_agg;
    bool bridge_on;
    bool has_threshold;
    bool has_barrier;
};

// One path of the threshold rule under the killed-discount estimator: recall
// sampled exactly, exact log-space GBM transitions with adaptive step
// aggregation far from the boundaries. Aggregated steps always carry
// Brownian-bridge crossing checks; base steps only when bridge_on.
PathResult simulate_killed(Xoshiro256pp& rng, const KilledContext& c) {
    PathResult out;
    double t_recall = kInf;
    if (c.lambda > 0.0) t_recall = -std::log(rng.next_open01()) / c.lambda;
    const double t_end = std::min(t_recall, c.horizon);

    double L = c.log_x;
    double t = 0.0;
    const std::int64_t max_iters = 64 + 4 * static_cast<std::int64_t>(c.horizon / c.dt);
    for (std::int64_t iter = 0; iter < max_iters; ++iter) {
        const double remaining = t_end - t;
        if (remaining <= 0.0) break;

        const double gap_up = c.has_barrier ? c.log_barrier - L : kInf;
        const double gap_dn = c.has_threshold ? L - c.log_threshold : kInf;
        const double dmin = std::min(gap_up, gap_dn);
        std::int64_t k = 1;
        if (dmin < kInf) {
            const double tmax = (dmin / (kAggregationSigmas * c.sigma)) *
                                (dmin / (kAggregationSigmas * c.sigma));
            k = std::clamp<std::int64_t>(static_cast<std::int64_t>(tmax / c.dt), 1, c.max_agg);
        } else {
            k = c.max_agg;
        }
        double step = static_cast<double>(k) * c.dt;
        if (step >= remaining) step = remaining;
        const double t_next = t + step;
        const double L_next =
            L + c.drift * step + c.sigma * std::sqrt(step) * normal_quantile(rng.next_open01());

        if (c.has_barrier && L_next >= c.log_barrier) {
            out.value = std::exp(-c.r * t_next) * (c.kappa - c.barrier_level);
            return out;
        }
        if (c.has_threshold && L_next <= c.log_threshold) {
            out.value = std::exp(-c.r * t_next) * (c.kappa - c.threshold_level);
            return out;
        }
        if (step > c.dt || c.bridge_on) {
            if (c.has_barrier) {
                const double e_up =
                    -2.0 * gap_up * (c.log_barrier - L_next) / (c.sigma_sq * step);
                if (e_up > kBridgeLogCutoff && rng.next_open01() < std::exp(e_up)) {
                    out.value = std::exp(-c.r * t_next) * (c.kappa - c.barrier_level);
                    return out;
                }
            }
            if (c.has_threshold) {
                const double e_dn =
                    -2.0 * gap_dn * (L_next - c.log_threshold) / (c.sigma_sq * step);
                if (e_dn > kBridgeLogCutoff && rng.next_open01() < std::exp(e_dn)) {
                    out.value = std::exp(-c.r * t_next) * (c.kappa - c.threshold_level);
                    return out;
                }
            }
        }
        L = L_next;
        t = t_next;
    }

    const double x_final = std::exp(L);
    if (t_recall <= c.horizon) {
        out.value = std::exp(-c.r * t_recall) * (c.kappa - x_final);
    } else {
        out.value = std::exp(-c.r * c.horizon) * (c.kappa - x_final);
        out.truncated = true;
    }
    return out;
}

// One path of the integral-form estimator: recall is integrated out, the
// payoff stream lambda (kappa - X_t) is accumulated with discounting at
// lambda + r on the base grid (no aggregation), and the terminal payoff is
// discounted at the same rate.
PathResult simulate_integral(Xoshiro256pp& rng, const KilledContext& c) {
    PathResult out;
    const double beta = c.lambda + c.r;
    const double decay_full = std::exp(-beta * c.dt);
    const double weight_full = c.lambda > 0.0 ? c.lambda * (1.0 - decay_full) / beta : 0.0;
    const double vol_full = c.sigma * std::sqrt(c.dt);

    double L = c.log_x;
    double x_cur = std::exp(L);
    double df = 1.0;  // e^{-beta t} at the current step start
    double integral = 0.0;
    double t = 0.0;
    const std::int64_t max_iters = 64 + 2 * static_cast<std::int64_t>(c.horizon / c.dt);
    for (std::int64_t iter = 0; iter < max_iters; ++iter) {
        const double remaining = c.horizon - t;
        if (remaining <= 0.0) break;
        double step = c.dt, decay = decay_full, weight = weight_full, vol = vol_full;
        if (step >= remaining) {
            step = remaining;
            decay = std::exp(-beta * step);
            weight = c.lambda > 0.0 ? c.lambda * (1.0 - decay) / beta : 0.0;
            vol = c.sigma * std::sqrt(step);
        }
        const double gap_up = c.has_barrier ? c.log_barrier - L : kInf;
        const double gap_dn = c.has_threshold ? L - c.log_threshold : kInf;
        const double L_next = L + c.drift * step + vol * normal_quantile(rng.next_open01());
        const double x_next = std::exp(L_next);
        integral += weight * df * (c.kappa - 0.5 * (x_cur + x_next));
        df *= decay;
        t += step;

        if (c.has_barrier && L_next >= c.log_barrier) {
            out.value = integral + df * (c.kappa - c.barrier_level);
            return out;
        }
        if (c.has_threshold && L_next <= c.log_threshold) {
            out.value = integral + df * (c.kappa - c.threshold_level);
            return out;
        }
        if (c.bridge_on) {
            if (c.has_barrier) {
                const double e_up =
                    -2.0 * gap_up * (c.log_barrier - L_next) / (c.sigma_sq * step);
                if (e_up > kBridgeLogCutoff && rng.next_open01() < std::exp(e_up)) {
                    out.value = integral + df * (c.kappa - c.barrier_level);
                    return out;
                }
            }
            if (c.has_threshold) {
                const double e_dn =
                    -2.0 * gap_dn * (L_next - c.log_threshold) / (c.sigma_sq * step);
                if (e_dn > kBridgeLogCutoff && rng.next_open01() < std::exp(e_dn)) {
                    out.value = integral + df * (c.kappa - c.threshold_level);
                    return out;
                }
            }
        }
        L = L_next;
        x_cur = x_next;
    }
    out.value = integral + df * (c.kappa - x_cur);
    out.truncated = true;
    return out;
}

} // namespace

void McConfig::validate() const {
    if (n_paths < 1) throw InvalidArgument("McConfig: n_paths must be >= 1");
    if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidArgument("McConfig: dt must be > 0");
    if (!(horizon > 0.0) || !std::isfinite(horizon))
        throw InvalidArgument("McConfig: horizon must be > 0");
    if (dt > horizon) throw InvalidArgument("McConfig: dt must not exceed horizon");
    if (threads < 0) throw InvalidArgument("McConfig: threads must be >= 0");
}

McEstimate estimate_value_simpler(double x, double kappa, double z, const ModelParams& p,
                                  const McConfig& cfg) {
    p.validate();
    cfg.validate();
    if (!(x > 0.0) || !std::isfinite(x)) throw InvalidArgument("x must be positive and finite");
    if (!(kappa > 0.0) || !std::isfinite(kappa))
        throw InvalidArgument("kappa must be positive and finite");
    const double barrier = kappa + p.c;
    if (z < 0.0 || z > barrier || !std::isfinite(z))
        throw InvalidArgument("threshold must lie in [0, kappa + c]");

    if (x >= barrier || x <= z) return certain_value(kappa - x, cfg);

    KilledContext c;
    c.log_x = std::log(x);
    c.has_barrier = true;
    c.log_barrier = std::log(barrier);
    c.has_threshold = z > 0.0;
    c.log_threshold = c.has_threshold ? std::log(z) : -kInf;
    c.barrier_level = barrier;
    c.threshold_level = z;
    c.kappa = kappa;
    c.drift = p.mu - 0.5 * p.sigma * p.sigma;
    c.sigma = p.sigma;
    c.sigma_sq = p.sigma * p.sigma;
    c.r = p.r;
    c.lambda = p.lambda;
    c.dt = cfg.dt;
    c.horizon = cfg.horizon;
    c.max_agg = std::max<std::int64_t>(1, static_cast<std::int64_t>(kMaxAggregatedYears / cfg.dt));
    c.bridge_on = cfg.bridge_correction;

    if (cfg.estimator == McEstimator::KilledDiscount)
        return run_paths(cfg, [&](Xoshiro256pp& rng) { return simulate_killed(rng, c); });
    return run_paths(cfg, [&](Xoshiro256pp& rng) { return simulate_integral(rng, c); });
}

McEstimate estimate_value(double x0, double z, const ModelParams& p, const McConfig& cfg) {
    if (!(x0 > 0.0) || !std::isfinite(x0))
        throw InvalidArgument("x0 must be positive and finite");
    if (!(z >= 0.0 && z <= x0))
        throw InvalidArgument("threshold must lie in [0, x0]");
    return estimate_value_simpler(x0, x0, z, p, cfg);
}

McEstimate estimate_hitting_laplace(Direction direction, double x, double z, double alpha,
                                    const ModelParams& p, const McConfig& cfg) {
    p.validate();
    cfg.validate();
    if (!(x > 0.0) || !(z > 0.0) || !std::isfinite(x) || !std::isfinite(z))
        throw InvalidArgument("prices must be positive and finite");
    if (!(alpha > 0.0) || !std::isfinite(alpha))
        throw InvalidArgument("alpha must be positive and finite");

    const bool already =
        direction == Direction::Up ? x >= z : x <= z;
    if (already) return certain_value(1.0, cfg);

    KilledContext c{};
    c.log_x = std::log(x);
    c.has_barrier = direction == Direction::Up;
    c.has_threshold = direction == Direction::Down;
    c.log_barrier = c.has_barrier ? std::log(z) : kInf;
    c.log_threshold = c.has_threshold ? std::log(z) : -kInf;
    // payoff bookkeeping: kappa - level = 1 makes the hit payoff exp(-alpha t)
    c.kappa = 0.0;
    c.barrier_level = -1.0;
    c.threshold_level = -1.0;
    c.drift = p.mu - 0.5 * p.sigma * p.sigma;
    c.sigma = p.sigma;
    c.sigma_sq = p.sigma * p.sigma;
    c.r = alpha;
    c.lambda = 0.0;  // no recall in the hitting-time statistic
    c.dt = cfg.dt;
    c.horizon = cfg.horizon;
    c.max_agg = std::max<std::int64_t>(1, static_cast<std::int64_t>(kMaxAggregatedYears / cfg.dt));
    c.bridge_on = cfg.bridge_correction;

    return run_paths(cfg, [&](Xoshiro256pp& rng) {
        PathResult res = simulate_killed(rng, c);
        if (res.truncated) res.value = 0.0;  // never hit within the horizon
        return res;
    });
}

} // namespace shortsale
