#pragma once

#include <optional>
#include <span>
#include <vector>

namespace levystop {

/**
 * Dense univariate polynomial with real coefficients.
 *
 * Coefficients are stored in ascending order: coeffs()[k] multiplies x^k.
 * Trailing coefficients with |c| <= 1e-14 * max|c| are stripped on
 * construction, so the leading coefficient is nonzero unless the polynomial
 * is identically zero (stored as the single coefficient 0).
 */
class Polynomial {
public:
    Polynomial() : coeffs_{0.0} {}
    explicit Polynomial(std::vector<double> coeffs);
    Polynomial(std::initializer_list<double> coeffs)
        : Polynomial(std::vector<double>(coeffs)) {}

    static Polynomial constant(double c) { return Polynomial({c}); }
    static Polynomial monomial(int k, double c = 1.0);
    /// Monic polynomial with the given real roots, prod (x - root).
    static Polynomial from_roots(std::span<const double> roots);

    const std::vector<double>& coeffs() const noexcept { return coeffs_; }
    int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
    double leading() const noexcept { return coeffs_.back(); }
    bool is_zero() const noexcept { return coeffs_.size() == 1 && coeffs_[0] == 0.0; }
    /// Coefficient of x^k, zero beyond the degree.
    double operator[](int k) const noexcept {
        return k >= 0 && k <= degree() ? coeffs_[static_cast<std::size_t>(k)] : 0.0;
    }
    double max_abs_coeff() const noexcept;

    /// Horner evaluation.
    double operator()(double x) const noexcept;

    friend Polynomial operator+(const Polynomial& a, const Polynomial& b);
    friend Polynomial operator-(const Polynomial& a, const Polynomial& b);
    friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
    friend Polynomial operator*(double s, const Polynomial& p);

private:
    std::vector<double> coeffs_;
};

double eval(const Polynomial& p, double x) noexcept;

Polynomial derivative(const Polynomial& p);

/// q(z) = p(z + c), via repeated synthetic division (Taylor shift).
Polynomial shift(const Polynomial& p, double c);

/// Quotient and remainder of polynomial long division; divisor must be nonzero.
struct DivisionResult {
    Polynomial quotient;
    Polynomial remainder;
};
DivisionResult divide(const Polynomial& num, const Polynomial& den);

/// Sturm sequence p, p', -rem(p, p'), ... with each member scaled to unit
/// max-norm (positive scaling keeps the sign pattern).
std::vector<Polynomial> sturm_sequence(const Polynomial& p);

/// Number of distinct real roots of p in (a, b]. Either endpoint may be
/// +-infinity.
int count_distinct_roots(const Polynomial& p, double a, double b);
int count_distinct_roots(std::span<const Polynomial> sturm, double a, double b);

/// A located real root with the bracket it was isolated in.
struct RootInfo {
    double value = 0.0;
    /// Width of the final bracket; tiny for simple roots.
    double width = 0.0;
    /// False when bisection hit tol without a sign change (multiple or
    /// clustered root); value is then the bracket midpoint.
    bool isolated = true;
};

/// All distinct real roots in (lo, hi], ascending. lo/hi may be infinite, in
/// which case the Cauchy bound is used.
std::vector<RootInfo> real_roots(const Polynomial& p, double lo, double hi, double tol = 1e-10);

/// Largest real root strictly greater than 0 with its isolation data.
std::optional<RootInfo> locate_largest_positive_root(const Polynomial& p, double tol = 1e-10);

/// Largest real root strictly greater than 0, or nullopt if there is none.
std::optional<double> largest_positive_root(const Polynomial& p, double tol = 1e-10);

/// True iff p has no real root in (a, infinity).
bool no_roots_above(const Polynomial& p, double a);

/// Cauchy upper bound on the modulus of all roots.
double cauchy_root_bound(const Polynomial& p);

}  // namespace levystop
