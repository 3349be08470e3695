#include "levystop/averaging.hpp"

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>

#include "levystop/errors.hpp"

namespace levystop {

namespace {

using BinomialTable = std::array<std::array<std::uint64_t, kMaxRewardDegree + 1>, kMaxRewardDegree + 1>;

constexpr BinomialTable make_binomials() {
    BinomialTable t{};
    for (int k = 0; k <= kMaxRewardDegree; ++k) {
        t[k][0] = 1;
        for (int l = 1; l <= k; ++l) t[k][l] = t[k - 1][l - 1] + (l < k ? t[k - 1][l] : 0);
    }
    return t;
}

constexpr BinomialTable kBinomials = make_binomials();

}  // namespace

std::uint64_t binomial(int k, int l) {
    if (k < 0 || k > kMaxRewardDegree || l < 0 || l > k) return 0;
    return kBinomials[static_cast<std::size_t>(k)][static_cast<std::size_t>(l)];
}

void require_normalized_reward(const Polynomial& p) {
    const int n = p.degree();
    if (p.is_zero() || n < 1 || n > kMaxRewardDegree)
        throw ShapeError("reward must have degree between 1 and " +
                         std::to_string(kMaxRewardDegree));
    if (std::abs(p.leading() - 1.0) > 1e-12)
        throw ShapeError("reward must be monic: p(x) = x^n + a_{n-1} x^{n-1} + ... + a_1 x");
    if (std::abs(p[0]) > 1e-12 * p.max_abs_coeff())
        throw ShapeError("reward must vanish at the origin: p(0) = 0");
}

Polynomial averaging_polynomial(const Polynomial& p, std::span<const double> moments) {
    require_normalized_reward(p);
    const int n = p.degree();
    if (static_cast<int>(moments.size()) < n + 1)
        throw ShapeError("averaging needs moments mu_0..mu_" + std::to_string(n));
    std::vector<double> b(static_cast<std::size_t>(n) + 1, 0.0);
    b[static_cast<std::size_t>(n)] = 1.0;
    for (int l = n - 1; l >= 0; --l) {
        double s = l == 0 ? 0.0 : p[l];
        for (int k = l + 1; k <= n; ++k)
            s -= b[static_cast<std::size_t>(k)] * static_cast<double>(binomial(k, l)) *
                 moments[static_cast<std::size_t>(k - l)];
        b[static_cast<std::size_t>(l)] = s;
    }
    return Polynomial(std::move(b));
}

std::vector<Polynomial> appell_basis(std::span<const double> moments, int n) {
    std::vector<Polynomial> q;
    q.reserve(static_cast<std::size_t>(std::max(n, 0)));
    for (int k = 1; k <= n; ++k) q.push_back(averaging_polynomial(Polynomial::monomial(k), moments));
    return q;
}

AveragingResult solve_threshold(const Polynomial& p, const SupremumLaw& law, double tol) {
    require_normalized_reward(p);
    AveragingResult res;
    res.reward = p;
    res.moments = moments(law, p.degree());
    res.averaging = averaging_polynomial(p, res.moments);
    const auto root = locate_largest_positive_root(res.averaging, tol);
    if (!root)
        throw NumericalError("averaging polynomial has no positive root; moments are likely "
                             "inaccurate");
    res.x_star = root->value;
    res.root_width = root->width;
    res.root_isolated = root->isolated;
    res.root_residual = std::abs(res.averaging(res.x_star));
    return res;
}

AffineReduction reduce_reward(const Polynomial& q) {
    if (q.degree() < 1 || !(q.leading() > 0.0))
        throw ShapeError("reward needs a positive leading coefficient and degree >= 1");
    const auto roots = real_roots(q, -std::numeric_limits<double>::infinity(),
                                  std::numeric_limits<double>::infinity());
    if (roots.empty()) throw ShapeError("reward has no real root; it cannot be normalized");
    AffineReduction red;
    red.scale = q.leading();
    red.offset = roots.front().value;
    std::vector<double> c = shift((1.0 / red.scale) * q, red.offset).coeffs();
    c.front() = 0.0;
    c.back() = 1.0;
    red.normalized = Polynomial(std::move(c));
    return red;
}

}  // namespace levystop
