#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "levystop/levy_model.hpp"
#include "levystop/polynomial.hpp"

namespace levystop {

/// Rewards above this degree are rejected; k! growth in the moments makes
/// the backward recursion unreliable past it.
inline constexpr int kMaxRewardDegree = 20;

/// Exact binomial coefficient C(k, l) for 0 <= l <= k <= kMaxRewardDegree.
std::uint64_t binomial(int k, int l);

/// Throws ShapeError unless p is monic, p(0) = 0, and 1 <= degree <= 20.
void require_normalized_reward(const Polynomial& p);

/**
 * Averaging polynomial P of a normalized reward p with respect to a random
 * variable with moments mu_0..mu_n: the unique monic P of degree n with
 * E P(x + M) = p(x) for every x.
 *
 * Solves sum_{k>=l} b_k C(k,l) mu_{k-l} = a_l top-down from b_n = 1.
 */
Polynomial averaging_polynomial(const Polynomial& p, std::span<const double> moments);

/// Appell polynomials [Q_1, ..., Q_n]: Q_k is the averaging polynomial of x^k.
std::vector<Polynomial> appell_basis(std::span<const double> moments, int n);

struct AveragingResult {
    Polynomial reward;     ///< p_n, monic with p_n(0) = 0
    Polynomial averaging;  ///< P_n
    double x_star = 0.0;   ///< largest positive root of P_n
    std::vector<double> moments;
    /// Width of the bracket x_star was isolated in, and whether a sign
    /// change was seen; a wide or non-isolated bracket flags a root cluster.
    double root_width = 0.0;
    bool root_isolated = true;
    /// |P_n(x_star)|
    double root_residual = 0.0;

    const std::vector<double>& b_coeffs() const noexcept { return averaging.coeffs(); }
};

/// Averaging polynomial and threshold for reward p under the given law.
/// Throws NumericalError if P_n has no positive root.
AveragingResult solve_threshold(const Polynomial& p, const SupremumLaw& law, double tol = 1e-10);

/**
 * Reduction of a general reward to the normalized class.
 *
 * A polynomial q with positive leading coefficient and at least one real root
 * is written q(x) = scale * p(x - offset) with p monic, p(0) = 0, and offset
 * the smallest real root of q. The stopping problem for q(.) then has value
 * scale * V(. - offset), with V the value for p.
 */
struct AffineReduction {
    double scale = 1.0;
    double offset = 0.0;
    Polynomial normalized;
};

/// Throws ShapeError when q has non-positive leading coefficient or no real root.
AffineReduction reduce_reward(const Polynomial& q);

}  // namespace levystop
