#include "levystop/valuation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace levystop {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr long kMaxRefinedPoints = 1L << 20;

// int_c^inf z^k exp(-r z) dz for the coefficients of q, weighted and summed.
double tail_moment_sum(const Polynomial& q, double rate, double c) {
    const double rc = rate * c;
    const double decay = std::exp(-rc);
    double fact_over_pow = 1.0 / rate;  // k! / r^{k+1}
    double poisson_term = 1.0;          // (rc)^k / k!
    double poisson_sum = 1.0;
    double total = q[0] * fact_over_pow * decay * poisson_sum;
    for (int k = 1; k <= q.degree(); ++k) {
        fact_over_pow *= k / rate;
        poisson_term *= rc / k;
        poisson_sum += poisson_term;
        total += q[k] * fact_over_pow * decay * poisson_sum;
    }
    return total;
}

struct DominanceScan {
    const PiecewiseValue& value;
    const Polynomial& reward;
    double threshold;
    double min_spacing;
    double worst = kInf;
    double worst_x = 0.0;
    long points = 0;

    double margin(double x) {
        ++points;
        const double m = value(x) - reward_g(reward, x);
        if (m < worst) {
            worst = m;
            worst_x = x;
        }
        return m;
    }

    void refine(double lo, double mlo, double hi, double mhi) {
        if (hi - lo <= min_spacing || points >= kMaxRefinedPoints) return;
        const double mid = 0.5 * (lo + hi);
        const double mm = margin(mid);
        if (std::min(mlo, mm) < threshold) refine(lo, mlo, mid, mm);
        if (std::min(mm, mhi) < threshold) refine(mid, mm, hi, mhi);
    }
};

}  // namespace

double reward_g(const Polynomial& p, double x) { return std::max(p(std::max(x, 0.0)), 0.0); }

double expectation_above(const Polynomial& P, const SupremumLaw& law, double x, double a) {
    const Polynomial q = shift(P, x);
    const double c = std::max(a - x, 0.0);
    double total = 0.0;
    for (const auto& t : law.terms) total += t.weight * t.rate * tail_moment_sum(q, t.rate, c);
    return total;
}

double PiecewiseValue::operator()(double x) const {
    if (x >= x_star) return poly_branch(x);
    double v = 0.0;
    for (const auto& t : exp_branch) v += t.coefficient * std::exp(t.rate * (x - x_star));
    return v;
}

PiecewiseValue build_value(const AveragingResult& ar, const SupremumLaw& law) {
    PiecewiseValue pv;
    pv.x_star = ar.x_star;
    pv.poly_branch = ar.reward;
    const Polynomial shifted = shift(ar.averaging, ar.x_star);
    for (const auto& t : law.terms) {
        // B_i = A_i r_i sum_k c_k k! / r_i^{k+1}
        double fact_over_pow = 1.0 / t.rate;
        double s = shifted[0] * fact_over_pow;
        for (int k = 1; k <= shifted.degree(); ++k) {
            fact_over_pow *= k / t.rate;
            s += shifted[k] * fact_over_pow;
        }
        pv.exp_branch.push_back({t.weight * t.rate * s, t.rate});
    }
    return pv;
}

VerificationReport verify(const AveragingResult& ar, const SupremumLaw& law,
                          const PiecewiseValue& pv, const GridSpec& grid) {
    (void)law;
    VerificationReport rep;
    rep.grid = grid;
    const double x_star = ar.x_star;
    const Polynomial& P = ar.averaging;
    const double tol = grid.tol * std::max(1.0, std::abs(ar.reward(x_star)));
    rep.tol_used = tol;

    // Monotonicity of P_n on [x*, inf): exact via root isolation of P_n'.
    const Polynomial dP = derivative(P);
    if (dP(x_star) < -tol) {
        rep.monotone_ok = false;
        rep.monotone_exact = true;
        rep.monotone_witness_lo = rep.monotone_witness_hi = x_star;
    } else if (no_roots_above(dP, x_star)) {
        rep.monotone_ok = true;
        rep.monotone_exact = true;
    } else {
        const auto crit = real_roots(dP, x_star, kInf);
        const auto crossing = std::find_if(crit.begin(), crit.end(),
                                           [](const RootInfo& r) { return r.isolated; });
        if (crossing != crit.end()) {
            rep.monotone_ok = false;
            rep.monotone_exact = true;
            rep.monotone_witness_lo = crossing->value;
            rep.monotone_witness_hi =
                std::next(crossing) != crit.end() ? std::next(crossing)->value : x_star + grid.monotone_span;
        } else {
            // Only touching roots: inconclusive, scan P_n itself.
            rep.monotone_exact = false;
            rep.monotone_ok = true;
            const int n = std::max(grid.initial_points, 2) * 8;
            const double h = grid.monotone_span / n;
            double prev = P(x_star);
            for (int i = 1; i <= n; ++i) {
                const double x = x_star + i * h;
                const double cur = P(x);
                if (cur < prev - tol) {
                    rep.monotone_ok = false;
                    rep.monotone_witness_lo = x - h;
                    rep.monotone_witness_hi = x;
                    break;
                }
                prev = cur;
            }
        }
    }

    // Dominance V >= g on [0, x*]; below 0 it is automatic (g = 0 <= V).
    const int n = std::max(grid.initial_points, 2);
    const double h = x_star / (n - 1);
    DominanceScan scan{pv, ar.reward, 10.0 * tol, grid.min_spacing};
    std::vector<double> xs(static_cast<std::size_t>(n));
    std::vector<double> ms(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        xs[static_cast<std::size_t>(i)] = i == n - 1 ? x_star : i * h;
        ms[static_cast<std::size_t>(i)] = scan.margin(xs[static_cast<std::size_t>(i)]);
    }
    for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
        if (std::min(ms[i], ms[i + 1]) < scan.threshold) scan.refine(xs[i], ms[i], xs[i + 1], ms[i + 1]);
    }
    rep.worst_margin = scan.worst;
    rep.worst_margin_x = scan.worst_x;
    rep.dominance_points = static_cast<int>(scan.points);
    rep.dominance_ok = scan.worst >= -tol;

    rep.nonpositive_on_0_xstar = std::all_of(xs.begin(), xs.end(), [&](double x) { return P(x) <= tol; });

    // P_n <= 0 on all of (-inf, x*): needs odd degree (P_n -> -inf on the
    // left) and no positive value at a critical point below x*.
    bool below_ok = P.degree() % 2 == 1;
    if (below_ok) {
        for (const auto& c : real_roots(dP, -kInf, x_star))
            if (c.value < x_star && P(c.value) > tol) below_ok = false;
    }
    rep.corollary_sign_ok = below_ok && rep.monotone_ok;
    return rep;
}

}  // namespace levystop
