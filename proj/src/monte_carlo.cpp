#include "levystop/monte_carlo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <thread>

#include "levystop/errors.hpp"
#include "levystop/rng.hpp"
#include "levystop/valuation.hpp"

namespace levystop {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Dynamics {
    double drift = 0.0;
    double volatility = 0.0;
    double up_intensity = 0.0;
    double down_intensity = 0.0;
    double up_rate = 1.0;
    double down_rate = 1.0;

    double jump_intensity() const { return up_intensity + down_intensity; }
};

Dynamics dynamics_of(const LevyModel& m) {
    switch (m.kind()) {
        case ModelKind::brownian: {
            const auto& b = m.as<BrownianDrift>();
            return {b.drift, b.volatility, 0.0, 0.0, 1.0, 1.0};
        }
        case ModelKind::kou: {
            const auto& k = m.as<KouJumpDiffusion>();
            return {k.drift, k.volatility, k.up_intensity, k.down_intensity, k.up_rate, k.down_rate};
        }
        case ModelKind::spectrally_negative:
            break;
    }
    throw ConfigError("a spectrally negative model given only by phi cannot be simulated");
}

// Calls obs(t, x) at t = 0, after every grid step, and on both sides of each
// jump, until obs returns true or t reaches t_end.
template <class Observer>
void run_path(const Dynamics& d, PathRng& rng, double x0, double t_end, double dt, Observer&& obs) {
    double x = x0;
    double t = 0.0;
    if (obs(t, x)) return;
    const double lambda = d.jump_intensity();
    double next_jump = lambda > 0.0 ? rng.exponential(lambda) : kInf;
    auto diffuse = [&](double h) { x += d.drift * h + d.volatility * std::sqrt(h) * rng.normal(); };
    while (t < t_end) {
        const double target = std::min(t + dt, t_end);
        while (next_jump < target) {
            diffuse(next_jump - t);
            t = next_jump;
            if (obs(t, x)) return;
            if (rng.uniform() * lambda < d.up_intensity) {
                x += rng.exponential(d.up_rate);
            } else {
                x -= rng.exponential(d.down_rate);
            }
            if (obs(t, x)) return;
            next_jump = t + rng.exponential(lambda);
        }
        diffuse(target - t);
        t = target;
        if (obs(t, x)) return;
    }
}

template <class PathFn>
void for_each_path(std::int64_t n, unsigned workers, PathFn&& fn) {
    if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::int64_t>(workers, n));
    if (workers <= 1) {
        for (std::int64_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        const std::int64_t lo = n * w / workers;
        const std::int64_t hi = n * (w + 1) / workers;
        pool.emplace_back([lo, hi, &fn] {
            for (std::int64_t i = lo; i < hi; ++i) fn(i);
        });
    }
}

McEstimate summarize(const std::vector<double>& values, const PathConfig& cfg) {
    McEstimate est;
    est.n = static_cast<std::int64_t>(values.size());
    est.seed = cfg.seed;
    double sum = 0.0;
    for (double v : values) sum += v;
    est.mean = sum / static_cast<double>(est.n);
    if (est.n > 1) {
        double ss = 0.0;
        for (double v : values) ss += (v - est.mean) * (v - est.mean);
        est.std_error = std::sqrt(ss / static_cast<double>(est.n - 1) / static_cast<double>(est.n));
    }
    return est;
}

void validate_config(const PathConfig& cfg) {
    if (!(cfg.dt > 0.0) || !std::isfinite(cfg.dt)) throw ConfigError("mc: dt must be > 0");
    if (cfg.paths < 1) throw ConfigError("mc: paths must be >= 1");
    if (!std::isfinite(cfg.x0)) throw ConfigError("mc: x0 must be finite");
}

}  // namespace

double effective_horizon(const PathConfig& cfg, double r) {
    validate_config(cfg);
    if (!(r >= 0.0) || !std::isfinite(r)) throw ConfigError("mc: r must be finite and >= 0");
    double T = cfg.horizon;
    if (T == 0.0) {
        if (r == 0.0) throw ConfigError("mc: r = 0 requires an explicit horizon");
        T = 12.0 / r;
    }
    if (!(T > 0.0) || !std::isfinite(T)) throw ConfigError("mc: horizon must be > 0");
    if (cfg.dt > T) throw ConfigError("mc: dt must not exceed the horizon");
    return T;
}

double pooled_std_error(const McEstimate& a, const McEstimate& b) {
    return std::hypot(a.std_error, b.std_error);
}

std::vector<McEstimate> threshold_sweep(const LevyModel& m, const Polynomial& p,
                                        const PathConfig& cfg, double r,
                                        std::span<const double> thresholds) {
    const double T = effective_horizon(cfg, r);
    if (r == 0.0 && !(m.mean_increment() < 0.0))
        throw ValidityError("mc: r = 0 requires a process drifting to -infinity");
    if (thresholds.empty()) return {};
    for (double a : thresholds)
        if (!std::isfinite(a)) throw ConfigError("mc: thresholds must be finite");
    const Dynamics dyn = dynamics_of(m);

    const std::size_t k = thresholds.size();
    std::vector<std::size_t> order(k);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t i, std::size_t j) { return thresholds[i] < thresholds[j]; });
    std::vector<double> sorted(k);
    for (std::size_t i = 0; i < k; ++i) sorted[i] = thresholds[order[i]];

    const auto n = static_cast<std::size_t>(cfg.paths);
    std::vector<std::vector<double>> values(k, std::vector<double>(n, 0.0));
    std::vector<std::vector<char>> hit(k, std::vector<char>(n, 0));

    for_each_path(cfg.paths, cfg.workers, [&](std::int64_t path) {
        const auto i = static_cast<std::size_t>(path);
        PathRng rng(cfg.seed, static_cast<std::uint64_t>(path));
        double t_end = T;
        double kill = kInf;
        if (cfg.weighting == Weighting::killing && r > 0.0) {
            kill = rng.exponential(r);
            t_end = std::min(T, kill);
        }
        std::size_t pending = 0;
        run_path(dyn, rng, cfg.x0, t_end, cfg.dt, [&](double t, double x) {
            while (pending < k && x >= sorted[pending]) {
                double v = 0.0;
                if (cfg.weighting == Weighting::discount) {
                    v = std::exp(-r * t) * reward_g(p, x);
                } else if (t < kill) {
                    v = reward_g(p, x);
                }
                values[order[pending]][i] = v;
                hit[order[pending]][i] = 1;
                ++pending;
            }
            return pending == k;
        });
    });

    std::vector<McEstimate> out;
    out.reserve(k);
    for (std::size_t j = 0; j < k; ++j) {
        McEstimate est = summarize(values[j], cfg);
        est.horizon = T;
        est.horizon_discount = std::exp(-r * T);
        const auto misses = std::count(hit[j].begin(), hit[j].end(), char{0});
        est.truncated_fraction = static_cast<double>(misses) / static_cast<double>(n);
        out.push_back(est);
    }
    return out;
}

McEstimate simulate_discounted_reward(const LevyModel& m, const Polynomial& p, double threshold,
                                      const PathConfig& cfg, double r) {
    const double thresholds[] = {threshold};
    return threshold_sweep(m, p, cfg, r, thresholds).front();
}

McEstimate sample_supremum(const LevyModel& m, double r, const PathConfig& cfg,
                           const SupremumFunctional& f) {
    const double T = effective_horizon(cfg, r);
    const Dynamics dyn = dynamics_of(m);
    std::vector<double> values(static_cast<std::size_t>(cfg.paths));
    std::vector<char> truncated(values.size(), 0);
    for_each_path(cfg.paths, cfg.workers, [&](std::int64_t path) {
        PathRng rng(cfg.seed, static_cast<std::uint64_t>(path));
        const double kill = r > 0.0 ? rng.exponential(r) : kInf;
        double sup = cfg.x0;
        run_path(dyn, rng, cfg.x0, std::min(kill, T), cfg.dt, [&](double, double x) {
            sup = std::max(sup, x);
            return false;
        });
        values[static_cast<std::size_t>(path)] = f(sup);
        truncated[static_cast<std::size_t>(path)] = kill > T;
    });
    McEstimate est = summarize(values, cfg);
    est.horizon = T;
    est.horizon_discount = std::exp(-r * T);
    est.truncated_fraction = static_cast<double>(std::count(truncated.begin(), truncated.end(), 1)) /
                             static_cast<double>(values.size());
    return est;
}

McEstimate sample_supremum_exact(const SupremumLaw& law, const PathConfig& cfg,
                                 const SupremumFunctional& f) {
    validate_config(cfg);
    law.validate();
    for (const auto& t : law.terms)
        if (t.weight < 0.0)
            throw ConfigError("exact supremum sampling needs non-negative mixture weights");
    std::vector<double> values(static_cast<std::size_t>(cfg.paths));
    for_each_path(cfg.paths, cfg.workers, [&](std::int64_t path) {
        PathRng rng(cfg.seed, static_cast<std::uint64_t>(path));
        const double u = rng.uniform();
        std::size_t j = 0;
        double acc = law.terms[0].weight;
        while (u > acc && j + 1 < law.terms.size()) acc += law.terms[++j].weight;
        values[static_cast<std::size_t>(path)] = f(cfg.x0 + rng.exponential(law.terms[j].rate));
    });
    McEstimate est = summarize(values, cfg);
    return est;
}

bool IdentityCheck::within(double sigmas) const {
    // Slack for the degenerate x0 >= a case, where both sides are exact.
    return std::abs(lhs - rhs.mean) <= sigmas * rhs.std_error + 1e-9 * std::max(1.0, std::abs(lhs));
}

IdentityCheck check_fluctuation_identity(const LevyModel& m, const AveragingResult& ar,
                                         const SupremumLaw& law, double a, const PathConfig& cfg,
                                         double r) {
    if (a < ar.x_star - 1e-12 * std::max(1.0, std::abs(ar.x_star)))
        throw ConfigError("identity check needs a >= x_star (" + std::to_string(ar.x_star) + ")");
    IdentityCheck out;
    out.lhs = expectation_above(ar.averaging, law, cfg.x0, a);
    out.rhs = simulate_discounted_reward(m, ar.reward, a, cfg, r);
    return out;
}

}  // namespace levystop
