#include "levystop/polynomial.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>

namespace levystop {

namespace {

constexpr double kStripRelTol = 1e-14;
// Remainders below this (relative to the unit-normalized dividend) are
// treated as exact zeros when building Sturm sequences.
constexpr double kSturmZeroTol = 1e-11;

Polynomial unit_scaled(const Polynomial& p) {
    const double m = p.max_abs_coeff();
    if (m == 0.0) return p;
    return (1.0 / m) * p;
}

int sign_of(double v) { return (v > 0.0) - (v < 0.0); }

int sign_at(const Polynomial& p, double x) {
    if (std::isinf(x)) {
        int s = sign_of(p.leading());
        if (x < 0.0 && p.degree() % 2 == 1) s = -s;
        return s;
    }
    return sign_of(p(x));
}

int sign_variations(std::span<const Polynomial> seq, double x) {
    int changes = 0;
    int prev = 0;
    for (const auto& q : seq) {
        const int s = sign_at(q, x);
        if (s == 0) continue;
        if (prev != 0 && s != prev) ++changes;
        prev = s;
    }
    return changes;
}

// Bisection-safeguarded Newton on a bracket with a sign change.
RootInfo polish(const Polynomial& p, const Polynomial& dp, double lo, double hi) {
    double flo = p(lo);
    if (flo == 0.0) return {lo, 0.0, true};
    if (p(hi) == 0.0) return {hi, 0.0, true};
    double x = 0.5 * (lo + hi);
    double last_step = hi - lo;
    for (int it = 0; it < 200; ++it) {
        const double f = p(x);
        if (f == 0.0) return {x, 0.0, true};
        if (sign_of(f) == sign_of(flo)) {
            lo = x;
            flo = f;
        } else {
            hi = x;
        }
        const double df = dp(x);
        double next = (df != 0.0) ? x - f / df : lo - 1.0;
        if (!(next > lo && next < hi) || std::abs(next - x) > 0.5 * last_step) {
            next = 0.5 * (lo + hi);
        }
        last_step = std::abs(next - x);
        x = next;
        const double scale = std::max(1.0, std::abs(x));
        // Polish to working precision; tol only bounds the isolation stage.
        if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * scale ||
            last_step <= 4.0 * std::numeric_limits<double>::epsilon() * scale) {
            break;
        }
    }
    return {x, std::min(hi - lo, 2.0 * last_step), true};
}

struct Isolator {
    const Polynomial& p;
    Polynomial dp;
    std::vector<Polynomial> sturm;
    double tol;
    std::vector<RootInfo> out;

    int variations(double x) const { return sign_variations(sturm, x); }

    void run(double a, double b, int va, int vb) {
        const int count = va - vb;
        if (count <= 0) return;
        if (count == 1) {
            const double pa = p(a);
            const double pb = p(b);
            if (pb == 0.0) {
                out.push_back({b, 0.0, true});
                return;
            }
            if (sign_of(pa) * sign_of(pb) < 0) {
                out.push_back(polish(p, dp, a, b));
                return;
            }
        }
        if (b - a <= tol) {
            out.push_back({0.5 * (a + b), b - a, false});
            return;
        }
        double mid = 0.5 * (a + b);
        // A multiple root sitting exactly on the split point breaks the
        // variation count; move off it.
        if (p(mid) == 0.0) mid += 1e-7 * (b - a);
        const int vm = variations(mid);
        run(a, mid, va, vm);
        run(mid, b, vm, vb);
    }
};

}  // namespace

Polynomial::Polynomial(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {
    if (coeffs_.empty()) {
        coeffs_.push_back(0.0);
        return;
    }
    const double m = max_abs_coeff();
    while (coeffs_.size() > 1 && std::abs(coeffs_.back()) <= kStripRelTol * m) {
        coeffs_.pop_back();
    }
    if (coeffs_.size() == 1 && std::abs(coeffs_[0]) == 0.0) coeffs_[0] = 0.0;
}

Polynomial Polynomial::monomial(int k, double c) {
    assert(k >= 0);
    std::vector<double> v(static_cast<std::size_t>(k) + 1, 0.0);
    v.back() = c;
    return Polynomial(std::move(v));
}

Polynomial Polynomial::from_roots(std::span<const double> roots) {
    Polynomial p = constant(1.0);
    for (double r : roots) p = p * Polynomial({-r, 1.0});
    return p;
}

double Polynomial::max_abs_coeff() const noexcept {
    double m = 0.0;
    for (double c : coeffs_) m = std::max(m, std::abs(c));
    return m;
}

double Polynomial::operator()(double x) const noexcept {
    double acc = 0.0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
    return acc;
}

Polynomial operator+(const Polynomial& a, const Polynomial& b) {
    std::vector<double> v(std::max(a.coeffs_.size(), b.coeffs_.size()), 0.0);
    for (std::size_t k = 0; k < a.coeffs_.size(); ++k) v[k] += a.coeffs_[k];
    for (std::size_t k = 0; k < b.coeffs_.size(); ++k) v[k] += b.coeffs_[k];
    return Polynomial(std::move(v));
}

Polynomial operator-(const Polynomial& a, const Polynomial& b) { return a + (-1.0) * b; }

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    std::vector<double> v(a.coeffs_.size() + b.coeffs_.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
        for (std::size_t j = 0; j < b.coeffs_.size(); ++j) v[i + j] += a.coeffs_[i] * b.coeffs_[j];
    return Polynomial(std::move(v));
}

Polynomial operator*(double s, const Polynomial& p) {
    std::vector<double> v = p.coeffs_;
    for (double& c : v) c *= s;
    return Polynomial(std::move(v));
}

double eval(const Polynomial& p, double x) noexcept { return p(x); }

Polynomial derivative(const Polynomial& p) {
    if (p.degree() <= 0) return Polynomial();
    std::vector<double> v(static_cast<std::size_t>(p.degree()));
    for (int k = 1; k <= p.degree(); ++k) v[static_cast<std::size_t>(k - 1)] = k * p[k];
    return Polynomial(std::move(v));
}

Polynomial shift(const Polynomial& p, double c) {
    std::vector<double> a = p.coeffs();
    const std::size_t n = a.size() - 1;
    if (c == 0.0 || n == 0) return p;
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t j = n - 1;; --j) {
            a[j] += c * a[j + 1];
            if (j == k) break;
        }
    return Polynomial(std::move(a));
}

DivisionResult divide(const Polynomial& num, const Polynomial& den) {
    assert(!den.is_zero());
    const int dn = den.degree();
    std::vector<double> rem = num.coeffs();
    if (num.degree() < dn) return {Polynomial(), num};
    std::vector<double> quot(static_cast<std::size_t>(num.degree() - dn) + 1, 0.0);
    for (int k = num.degree() - dn; k >= 0; --k) {
        const double q = rem[static_cast<std::size_t>(k + dn)] / den.leading();
        quot[static_cast<std::size_t>(k)] = q;
        for (int j = 0; j <= dn; ++j) rem[static_cast<std::size_t>(k + j)] -= q * den[j];
        rem[static_cast<std::size_t>(k + dn)] = 0.0;
    }
    rem.resize(static_cast<std::size_t>(std::max(dn, 1)));
    return {Polynomial(std::move(quot)), Polynomial(std::move(rem))};
}

std::vector<Polynomial> sturm_sequence(const Polynomial& p) {
    std::vector<Polynomial> seq{unit_scaled(p)};
    if (p.degree() <= 0) return seq;
    seq.push_back(unit_scaled(derivative(p)));
    while (seq.back().degree() > 0) {
        const Polynomial& a = seq[seq.size() - 2];
        const Polynomial& b = seq.back();
        std::vector<double> r = divide(a, b).remainder.coeffs();
        for (double& c : r)
            if (std::abs(c) <= kSturmZeroTol) c = 0.0;
        Polynomial rem(std::move(r));
        if (rem.is_zero()) break;
        seq.push_back(unit_scaled((-1.0) * rem));
    }
    return seq;
}

int count_distinct_roots(std::span<const Polynomial> sturm, double a, double b) {
    if (sturm.empty() || !(a < b)) return 0;
    return std::max(0, sign_variations(sturm, a) - sign_variations(sturm, b));
}

int count_distinct_roots(const Polynomial& p, double a, double b) {
    if (p.degree() <= 0) return 0;
    const auto seq = sturm_sequence(p);
    return count_distinct_roots(seq, a, b);
}

double cauchy_root_bound(const Polynomial& p) {
    double m = 0.0;
    for (int k = 0; k < p.degree(); ++k) m = std::max(m, std::abs(p[k] / p.leading()));
    return 1.0 + m;
}

std::vector<RootInfo> real_roots(const Polynomial& p, double lo, double hi, double tol) {
    if (p.degree() <= 0 || !(lo < hi)) return {};
    const double bound = cauchy_root_bound(p) + 1.0;
    lo = std::max(lo, -bound);
    hi = std::min(hi, bound);
    if (!(lo < hi)) return {};
    Isolator iso{p, derivative(p), sturm_sequence(p), tol, {}};
    iso.run(lo, hi, iso.variations(lo), iso.variations(hi));
    return std::move(iso.out);
}

std::optional<RootInfo> locate_largest_positive_root(const Polynomial& p, double tol) {
    if (p.is_zero()) return std::nullopt;
    // Strip the factor x^m so the origin is not a root of what we isolate.
    std::vector<double> c = p.coeffs();
    const double m = p.max_abs_coeff();
    std::size_t drop = 0;
    while (drop + 1 < c.size() && std::abs(c[drop]) <= kStripRelTol * m) ++drop;
    const Polynomial q(std::vector<double>(c.begin() + static_cast<std::ptrdiff_t>(drop), c.end()));
    const auto roots = real_roots(q, 0.0, std::numeric_limits<double>::infinity(), tol);
    if (roots.empty()) return std::nullopt;
    return roots.back();
}

std::optional<double> largest_positive_root(const Polynomial& p, double tol) {
    if (auto r = locate_largest_positive_root(p, tol)) return r->value;
    return std::nullopt;
}

bool no_roots_above(const Polynomial& p, double a) {
    if (p.degree() <= 0) return true;
    if (p(a) == 0.0) a += 1e-12 * std::max(1.0, std::abs(a));
    return count_distinct_roots(p, a, std::numeric_limits<double>::infinity()) == 0;
}

}  // namespace levystop
