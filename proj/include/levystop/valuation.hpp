#pragma once

#include <vector>

#include "levystop/averaging.hpp"
#include "levystop/levy_model.hpp"
#include "levystop/polynomial.hpp"

namespace levystop {

/// g(x) = (p(x^+))^+.
double reward_g(const Polynomial& p, double x);

/**
 * E P(x + M) 1{x + M >= a} in closed form:
 *   sum_i A_i r_i int_{c}^{inf} P(x + z) exp(-r_i z) dz,  c = max(a - x, 0),
 * using int_c^inf z^k e^{-rz} dz = k!/r^{k+1} e^{-rc} sum_{j<=k} (rc)^j / j!.
 * Pass a <= x (or -inf) for the unrestricted expectation.
 */
double expectation_above(const Polynomial& P, const SupremumLaw& law, double x, double a);

struct ExpBranchTerm {
    double coefficient = 0.0;  ///< B_i
    double rate = 0.0;         ///< r_i
};

/// V(x) = p(x) for x >= x_star, sum B_i exp(r_i (x - x_star)) below.
struct PiecewiseValue {
    double x_star = 0.0;
    Polynomial poly_branch;
    std::vector<ExpBranchTerm> exp_branch;

    double operator()(double x) const;
};

PiecewiseValue build_value(const AveragingResult& ar, const SupremumLaw& law);

struct GridSpec {
    int initial_points = 512;
    /// Refinement stops once bisected intervals are this narrow.
    double min_spacing = 1e-6;
    /// Absolute sign tolerance before scaling by max(1, |p(x_star)|).
    double tol = 1e-9;
    /// Length of [x_star, x_star + span] for the grid fallback of the
    /// monotonicity check.
    double monotone_span = 10.0;
};

struct VerificationReport {
    /// P_n non-decreasing on [x_star, inf).
    bool monotone_ok = false;
    bool monotone_exact = false;  ///< decided by root isolation, not the grid fallback
    double monotone_witness_lo = 0.0;  ///< where P_n' goes negative, if !monotone_ok
    double monotone_witness_hi = 0.0;

    /// V - g >= -tol on [0, x_star].
    bool dominance_ok = false;
    double worst_margin = 0.0;
    double worst_margin_x = 0.0;
    int dominance_points = 0;

    /// Sufficient sign pattern Q(x) <= Q(x*) = 0 <= Q(y) <= Q(z) for all
    /// x < x* < y < z, checked with Q = P_n on the whole half-line (-inf, x*).
    bool corollary_sign_ok = false;
    /// P_n <= tol on the grid over [0, x_star]; enough for dominance since
    /// x + M >= x >= 0 there.
    bool nonpositive_on_0_xstar = false;

    double tol_used = 0.0;
    GridSpec grid;

    /// Both hypotheses of the one-sided verification theorem hold.
    bool certified() const noexcept { return monotone_ok && dominance_ok; }
};

VerificationReport verify(const AveragingResult& ar, const SupremumLaw& law,
                          const PiecewiseValue& pv, const GridSpec& grid = {});

}  // namespace levystop
