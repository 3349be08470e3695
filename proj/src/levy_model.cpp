#include "levystop/levy_model.hpp"

#include <boost/math/tools/toms748_solve.hpp>

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <string>

#include "levystop/errors.hpp"

namespace levystop {

namespace {

constexpr double kPoleGuard = 1e-9;

bool finite(double v) { return std::isfinite(v); }

void check_brownian(const BrownianDrift& b) {
    if (!finite(b.drift) || !finite(b.volatility) || b.volatility < 0.0)
        throw ConfigError("brownian model requires finite drift and volatility >= 0");
    if (b.volatility == 0.0 && b.drift <= 0.0)
        throw ConfigError("brownian model with zero volatility and non-positive drift is the "
                          "negative of a subordinator; supremum is degenerate");
}

void check_kou(const KouJumpDiffusion& k) {
    if (!finite(k.drift) || !finite(k.volatility) || !finite(k.up_intensity) ||
        !finite(k.down_intensity) || !finite(k.up_rate) || !finite(k.down_rate))
        throw ConfigError("kou model parameters must be finite");
    if (k.volatility <= 0.0)
        throw ConfigError("kou model requires volatility > 0 (two-root supremum law)");
    if (k.up_intensity < 0.0 || k.down_intensity < 0.0)
        throw ConfigError("kou jump intensities must be >= 0");
    if (k.up_rate <= 0.0 || k.down_rate <= 0.0)
        throw ConfigError("kou jump rates must be > 0");
}

double kou_psi(const KouJumpDiffusion& k, double z) {
    if (z == k.up_rate || z == -k.down_rate)
        throw PoleError("laplace exponent evaluated at a jump-rate pole z=" + std::to_string(z));
    return k.drift * z + 0.5 * k.volatility * k.volatility * z * z +
           k.up_intensity * z / (k.up_rate - z) - k.down_intensity * z / (z + k.down_rate);
}

// psi(z)/z, continuous at 0 where it equals E X_1.
double kou_psi_over_z(const KouJumpDiffusion& k, double z) {
    return k.drift + 0.5 * k.volatility * k.volatility * z + k.up_intensity / (k.up_rate - z) -
           k.down_intensity / (z + k.down_rate);
}

double solve_bracket(const std::function<double(double)>& f, double lo, double hi) {
    std::uintmax_t max_iter = 300;
    boost::math::tools::eps_tolerance<double> tol(std::numeric_limits<double>::digits - 2);
    const auto [a, b] = boost::math::tools::toms748_solve(f, lo, hi, tol, max_iter);
    return 0.5 * (a + b);
}

std::vector<double> kou_roots(const KouJumpDiffusion& k, double r) {
    std::function<double(double)> f;
    if (r > 0.0) {
        f = [&](double z) { return kou_psi(k, z) - r; };
    } else {
        f = [&](double z) { return kou_psi_over_z(k, z); };
    }
    const double below = k.up_rate * (1.0 - kPoleGuard);
    const double above = k.up_rate * (1.0 + kPoleGuard);
    if (!(f(0.0) < 0.0) || !(f(below) > 0.0))
        throw NumericalError("kou: no sign change for the first root on (0, up_rate)");
    const double r1 = solve_bracket(f, 0.0, below);

    if (!(f(above) < 0.0)) throw NumericalError("kou: no sign change just above up_rate");
    double top = 2.0 * k.up_rate;
    for (int i = 0; f(top) <= 0.0; ++i) {
        if (i > 200) throw NumericalError("kou: failed to bracket the second root");
        top *= 2.0;
    }
    const double r2 = solve_bracket(f, above, top);

    // The root count is asserted rather than characterized.
    Polynomial q = kou_root_polynomial(k, r);
    if (r == 0.0) q = divide(q, Polynomial({0.0, 1.0})).quotient;
    const int n = count_distinct_roots(q, 0.0, std::numeric_limits<double>::infinity());
    if (n != 2)
        throw NumericalError("kou: expected exactly two positive roots of psi(z)=r, found " +
                             std::to_string(n));
    return {r1, r2};
}

}  // namespace

LevyModel::LevyModel(Variant v) : v_(std::move(v)) {
    std::visit(
        [](const auto& m) {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, BrownianDrift>) {
                check_brownian(m);
            } else if constexpr (std::is_same_v<T, KouJumpDiffusion>) {
                check_kou(m);
            } else {
                if (!finite(m.phi) || m.phi <= 0.0)
                    throw ConfigError("spectrally negative model requires phi > 0");
            }
        },
        v_);
}

double LevyModel::mean_increment() const {
    switch (kind()) {
        case ModelKind::brownian:
            return as<BrownianDrift>().drift;
        case ModelKind::kou: {
            const auto& k = as<KouJumpDiffusion>();
            return k.drift + k.up_intensity / k.up_rate - k.down_intensity / k.down_rate;
        }
        case ModelKind::spectrally_negative:
            break;
    }
    throw ConfigError("mean increment is not available for a spectrally negative model given by phi");
}

std::string_view to_string(ModelKind k) noexcept {
    switch (k) {
        case ModelKind::brownian:
            return "brownian";
        case ModelKind::kou:
            return "kou";
        case ModelKind::spectrally_negative:
            return "spectrally_negative";
    }
    return "unknown";
}

double laplace_exponent(const LevyModel& m, double z) {
    switch (m.kind()) {
        case ModelKind::brownian: {
            const auto& b = m.as<BrownianDrift>();
            return b.drift * z + 0.5 * b.volatility * b.volatility * z * z;
        }
        case ModelKind::kou:
            return kou_psi(m.as<KouJumpDiffusion>(), z);
        case ModelKind::spectrally_negative:
            break;
    }
    throw ConfigError("laplace exponent is not stored for a spectrally negative model given by phi");
}

Polynomial kou_root_polynomial(const KouJumpDiffusion& k, double r) {
    const Polynomial z({0.0, 1.0});
    const Polynomial gauss({-r, k.drift, 0.5 * k.volatility * k.volatility});
    const Polynomial up_den({k.up_rate, -1.0});
    const Polynomial down_den({k.down_rate, 1.0});
    return gauss * up_den * down_den + k.up_intensity * (z * down_den) -
           k.down_intensity * (z * up_den);
}

std::vector<double> positive_wh_roots(const LevyModel& m, double r) {
    if (!finite(r) || r < 0.0) throw ConfigError("discount rate r must be finite and >= 0");
    if (m.kind() == ModelKind::spectrally_negative) return {m.as<SpectrallyNegative>().phi};
    if (r == 0.0 && !(m.mean_increment() < 0.0))
        throw ValidityError("r = 0 requires the process to drift to -infinity (E X_1 < 0); "
                            "otherwise the supremum is not a proper random variable");
    if (m.kind() == ModelKind::brownian) {
        const auto& b = m.as<BrownianDrift>();
        const double s2 = b.volatility * b.volatility;
        if (s2 == 0.0) return {r / b.drift};
        const double disc = std::sqrt(b.drift * b.drift + 2.0 * s2 * r);
        if (b.drift > 0.0) return {2.0 * r / (b.drift + disc)};
        return {(disc - b.drift) / s2};
    }
    return kou_roots(m.as<KouJumpDiffusion>(), r);
}

SupremumLaw supremum_law(const LevyModel& m, double r) {
    const auto roots = positive_wh_roots(m, r);
    SupremumLaw law;
    if (m.kind() != ModelKind::kou) {
        law.terms.push_back({1.0, roots.front()});
    } else {
        const double alpha = m.as<KouJumpDiffusion>().up_rate;
        const double r1 = roots[0];
        const double r2 = roots[1];
        law.terms.push_back({(1.0 - r1 / alpha) / (1.0 - r1 / r2), r1});
        law.terms.push_back({(1.0 - r2 / alpha) / (1.0 - r2 / r1), r2});
    }
    law.validate();
    return law;
}

double SupremumLaw::density(double x) const {
    if (x < 0.0) return 0.0;
    double f = 0.0;
    for (const auto& t : terms) f += t.weight * t.rate * std::exp(-t.rate * x);
    return f;
}

double SupremumLaw::tail(double x) const {
    if (x < 0.0) return 1.0;
    double s = 0.0;
    for (const auto& t : terms) s += t.weight * std::exp(-t.rate * x);
    return s;
}

void SupremumLaw::validate() const {
    if (terms.empty()) throw NumericalError("supremum law has no terms");
    double total = 0.0;
    double prev_rate = 0.0;
    for (const auto& t : terms) {
        if (!(t.rate > prev_rate) || !finite(t.weight))
            throw NumericalError("supremum law rates must be positive and strictly increasing");
        prev_rate = t.rate;
        total += t.weight;
    }
    if (std::abs(total - 1.0) > 1e-12) throw NumericalError("supremum law weights do not sum to one");
    const double tiny = -1e-12;
    bool ok = density(0.0) >= tiny * terms.front().rate && terms.front().weight >= tiny;
    for (std::size_t i = 0; ok && i < terms.size(); ++i)
        for (std::size_t j = i + 1; j < terms.size(); ++j) {
            const double ri = terms[i].rate;
            const double rj = terms[j].rate;
            const double cross = std::log(rj / ri) / (rj - ri);
            if (density(cross) < tiny) ok = false;
        }
    if (!ok) throw NumericalError("supremum law density is negative somewhere on [0, inf)");
}

std::vector<double> moments(const SupremumLaw& law, int n) {
    if (n < 0) throw ConfigError("moment order must be >= 0");
    std::vector<double> mu(static_cast<std::size_t>(n) + 1, 0.0);
    std::vector<double> term(law.terms.size());
    for (std::size_t i = 0; i < law.terms.size(); ++i) term[i] = law.terms[i].weight;
    for (int k = 0; k <= n; ++k) {
        double s = 0.0;
        for (std::size_t i = 0; i < term.size(); ++i) {
            if (k > 0) term[i] *= k / law.terms[i].rate;
            s += term[i];
        }
        mu[static_cast<std::size_t>(k)] = s;
    }
    mu[0] = 1.0;
    return mu;
}

}  // namespace levystop
