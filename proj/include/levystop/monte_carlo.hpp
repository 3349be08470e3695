#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "levystop/averaging.hpp"
#include "levystop/levy_model.hpp"
#include "levystop/polynomial.hpp"

namespace levystop {

/// How the discount rate r enters a path estimate.
enum class Weighting {
    discount,  ///< weight exp(-r tau)
    killing,   ///< count the reward only if tau < e(r), e(r) ~ Exp(r) drawn per path
};

struct PathConfig {
    double dt = 1e-3;
    /// Simulation horizon T; 0 selects 12 / r (requires r > 0).
    double horizon = 0.0;
    std::int64_t paths = 100000;
    std::uint64_t seed = 1;
    double x0 = 0.0;
    /// Worker threads; 0 uses the hardware concurrency. Results do not depend
    /// on this value.
    unsigned workers = 1;
    Weighting weighting = Weighting::discount;
};

/// Horizon actually used for (cfg, r). Throws ConfigError on invalid input.
double effective_horizon(const PathConfig& cfg, double r);

struct McEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::int64_t n = 0;
    std::uint64_t seed = 0;
    double horizon = 0.0;
    /// Fraction of paths still running at the horizon (contributing 0).
    double truncated_fraction = 0.0;
    /// exp(-r T): the discount any truncated contribution would carry.
    double horizon_discount = 0.0;
};

/// sqrt(a.se^2 + b.se^2).
double pooled_std_error(const McEstimate& a, const McEstimate& b);

/**
 * Estimate E exp(-r tau) g(X_tau) 1{tau < T}, tau = first time X >= threshold,
 * X_0 = cfg.x0. Diffusion is stepped with Euler increments of size dt; jumps
 * are placed at their exact exponential-clock times, so jump overshoot is
 * exact while diffusive crossings are detected on the grid.
 */
McEstimate simulate_discounted_reward(const LevyModel& m, const Polynomial& p, double threshold,
                                      const PathConfig& cfg, double r);

/// The same estimate for several thresholds on common random paths: path i
/// is identical for every threshold, so the threshold-x estimate here equals
/// simulate_discounted_reward(..., x, ...) bit for bit.
std::vector<McEstimate> threshold_sweep(const LevyModel& m, const Polynomial& p,
                                        const PathConfig& cfg, double r,
                                        std::span<const double> thresholds);

using SupremumFunctional = std::function<double(double)>;

/// E f(M), M = sup of X on [0, min(e(r), T)] started from cfg.x0, by path
/// simulation. r = 0 runs every path to the horizon.
McEstimate sample_supremum(const LevyModel& m, double r, const PathConfig& cfg,
                           const SupremumFunctional& f);

/// E f(x0 + M) with M drawn exactly from the mixture by inversion. Requires
/// non-negative mixture weights.
McEstimate sample_supremum_exact(const SupremumLaw& law, const PathConfig& cfg,
                                 const SupremumFunctional& f);

struct IdentityCheck {
    double lhs = 0.0;  ///< E G(x0 + M) 1{x0 + M >= a}, closed form
    McEstimate rhs;    ///< E exp(-r tau_a) g(X_{tau_a}), simulated

    bool within(double sigmas) const;
};

/// Both sides of the first-passage identity for a >= x_star.
IdentityCheck check_fluctuation_identity(const LevyModel& m, const AveragingResult& ar,
                                         const SupremumLaw& law, double a, const PathConfig& cfg,
                                         double r);

}  // namespace levystop
