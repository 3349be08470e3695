#pragma once

#include <string_view>
#include <variant>
#include <vector>

#include "levystop/polynomial.hpp"

namespace levystop {

/// X_t = a t + sigma W_t.
struct BrownianDrift {
    double drift = 0.0;
    double volatility = 1.0;
};

/// Jump diffusion with two-sided exponential jumps:
/// X_t = a t + sigma W_t + sum_{k<=N_t} Y_k - sum_{k<=N'_t} Y'_k,
/// N (resp. N') Poisson with intensity up_intensity (resp. down_intensity),
/// Y ~ Exp(up_rate), Y' ~ Exp(down_rate).
struct KouJumpDiffusion {
    double drift = 0.0;
    double volatility = 1.0;
    double up_intensity = 0.0;
    double down_intensity = 0.0;
    double up_rate = 1.0;
    double down_rate = 1.0;
};

/// A spectrally negative process known only through Phi(r), the positive
/// root of psi(z) = r. Its killed supremum is Exp(Phi(r)).
struct SpectrallyNegative {
    double phi = 1.0;
};

enum class ModelKind { brownian, kou, spectrally_negative };

class LevyModel {
public:
    using Variant = std::variant<BrownianDrift, KouJumpDiffusion, SpectrallyNegative>;

    /// Throws ConfigError on invalid parameters.
    explicit LevyModel(Variant v);

    static LevyModel brownian(double drift, double volatility) {
        return LevyModel(BrownianDrift{drift, volatility});
    }
    static LevyModel kou(double drift, double volatility, double up_intensity,
                         double down_intensity, double up_rate, double down_rate) {
        return LevyModel(KouJumpDiffusion{drift, volatility, up_intensity, down_intensity,
                                          up_rate, down_rate});
    }
    static LevyModel spectrally_negative(double phi) { return LevyModel(SpectrallyNegative{phi}); }

    ModelKind kind() const noexcept { return static_cast<ModelKind>(v_.index()); }
    const Variant& variant() const noexcept { return v_; }
    template <class T>
    const T& as() const {
        return std::get<T>(v_);
    }

    /// Whether paths can be simulated (false for SpectrallyNegative).
    bool simulable() const noexcept { return kind() != ModelKind::spectrally_negative; }
    /// E X_1. Not available for SpectrallyNegative.
    double mean_increment() const;

private:
    Variant v_;
};

std::string_view to_string(ModelKind k) noexcept;

/// psi(z) with E exp(z X_t) = exp(t psi(z)). Throws PoleError at a jump rate
/// pole (Kou) and ConfigError for SpectrallyNegative, whose psi is not stored.
double laplace_exponent(const LevyModel& m, double z);

/// Positive roots of psi(z) = r, ascending. One root for spectrally negative
/// models, two for Kou (r_1 < up_rate < r_2). Throws ValidityError when
/// r = 0 and the process does not drift to -infinity.
std::vector<double> positive_wh_roots(const LevyModel& m, double r);

/// Denominator-cleared form of psi(z) - r for Kou; its real roots are the
/// roots of psi(z) = r.
Polynomial kou_root_polynomial(const KouJumpDiffusion& k, double r);

struct ExpTerm {
    double weight = 1.0;  ///< A_i
    double rate = 1.0;    ///< r_i
};

/// Law of the killed supremum as a finite exponential mixture with density
/// f(x) = sum A_i r_i exp(-r_i x) on x >= 0.
struct SupremumLaw {
    std::vector<ExpTerm> terms;

    double density(double x) const;
    /// P(M > x).
    double tail(double x) const;
    /// Throws NumericalError if weights do not sum to one, rates are not
    /// strictly increasing and positive, or the density goes negative.
    void validate() const;
};

SupremumLaw supremum_law(const LevyModel& m, double r);

/// [mu_0, ..., mu_n] with mu_k = k! sum A_i / r_i^k.
std::vector<double> moments(const SupremumLaw& law, int n);

}  // namespace levystop
