#include "doctest.h"

#include <cmath>
#include <random>

#include "levystop/errors.hpp"
#include "levystop/levy_model.hpp"
#include "oracles.hpp"

using namespace levystop;

namespace {

const LevyModel kPaperKou = LevyModel::kou(2.0, 1.0, 1.0, 1.0, 2.0, 2.0);

std::vector<oracle::Term> terms_of(const SupremumLaw& law) {
    std::vector<oracle::Term> t;
    for (const auto& e : law.terms) t.push_back({e.weight, e.rate});
    return t;
}

}  // namespace

TEST_CASE("laplace exponent") {
    CHECK(laplace_exponent(LevyModel::brownian(0.0, 1.0), 1.0) == 0.5);
    CHECK(std::abs(laplace_exponent(kPaperKou, 1.4327) - 6.0) < 2e-3);
    CHECK(laplace_exponent(kPaperKou, 0.0) == 0.0);
    CHECK(laplace_exponent(LevyModel::brownian(-0.3, 2.0), 0.0) == 0.0);
    CHECK_THROWS_AS(laplace_exponent(kPaperKou, 2.0), PoleError);
    CHECK_THROWS_AS(laplace_exponent(kPaperKou, -2.0), PoleError);
    CHECK_THROWS_AS(laplace_exponent(LevyModel::spectrally_negative(2.0), 1.0), ConfigError);
}

TEST_CASE("model validation") {
    CHECK_THROWS_AS(LevyModel::brownian(0.0, -1.0), ConfigError);
    CHECK_THROWS_AS(LevyModel::brownian(-1.0, 0.0), ConfigError);  // negative of a subordinator
    CHECK_THROWS_AS(LevyModel::brownian(0.0, 0.0), ConfigError);
    CHECK_NOTHROW(LevyModel::brownian(1.0, 0.0));
    CHECK_THROWS_AS(LevyModel::kou(0.0, 0.0, 1.0, 1.0, 2.0, 2.0), ConfigError);
    CHECK_THROWS_AS(LevyModel::kou(0.0, 1.0, -1.0, 1.0, 2.0, 2.0), ConfigError);
    CHECK_THROWS_AS(LevyModel::kou(0.0, 1.0, 1.0, 1.0, 0.0, 2.0), ConfigError);
    CHECK_THROWS_AS(LevyModel::spectrally_negative(0.0), ConfigError);
}

TEST_CASE("positive Wiener-Hopf roots") {
    CHECK(positive_wh_roots(LevyModel::brownian(0.0, 1.0), 0.5) == std::vector<double>{1.0});
    CHECK(positive_wh_roots(LevyModel::brownian(0.0, 1.0), 2.0).front() == doctest::Approx(2.0).epsilon(1e-15));
    const auto roots = positive_wh_roots(kPaperKou, 6.0);
    REQUIRE(roots.size() == 2);
    CHECK(std::abs(roots[0] - 1.4327) <= 5e-4);
    CHECK(std::abs(roots[1] - 2.8740) <= 5e-4);

    SUBCASE("drift to -infinity at r = 0") {
        const auto bm = positive_wh_roots(LevyModel::brownian(-0.5, 1.0), 0.0);
        CHECK(bm.front() == doctest::Approx(1.0));
        CHECK_THROWS_AS(positive_wh_roots(LevyModel::brownian(0.5, 1.0), 0.0), ValidityError);
        CHECK_THROWS_AS(positive_wh_roots(LevyModel::brownian(0.0, 1.0), 0.0), ValidityError);
        CHECK_THROWS_AS(positive_wh_roots(kPaperKou, 0.0), ValidityError);
        const auto kou = LevyModel::kou(-1.0, 1.0, 1.0, 1.0, 2.0, 3.0);
        const auto k0 = positive_wh_roots(kou, 0.0);
        REQUIRE(k0.size() == 2);
        for (double z : k0) CHECK(std::abs(laplace_exponent(kou, z)) < 1e-9);
    }

    SUBCASE("brownian with positive drift and no volatility") {
        CHECK(positive_wh_roots(LevyModel::brownian(2.0, 0.0), 1.0).front() == doctest::Approx(0.5));
    }

    SUBCASE("random admissible Kou parameters") {
        std::mt19937_64 gen(29);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        for (int i = 0; i < 300; ++i) {
            const auto m = LevyModel::kou(-2.0 + 4.0 * u(gen), 0.2 + 2.0 * u(gen), 3.0 * u(gen),
                                          3.0 * u(gen), 0.5 + 5.0 * u(gen), 0.5 + 5.0 * u(gen));
            const double r = 0.05 + 8.0 * u(gen);
            const auto z = positive_wh_roots(m, r);
            REQUIRE(z.size() == 2);
            const double alpha = m.as<KouJumpDiffusion>().up_rate;
            CHECK(z[0] > 0.0);
            CHECK(z[0] < alpha);
            CHECK(z[1] > alpha);
            for (double root : z) CHECK(std::abs(laplace_exponent(m, root) - r) <= 1e-9 * std::max(1.0, r));
        }
    }
}

TEST_CASE("kou root polynomial has the same roots") {
    const auto& k = kPaperKou.as<KouJumpDiffusion>();
    const Polynomial q = kou_root_polynomial(k, 6.0);
    CHECK(q.degree() == 4);
    for (double z : positive_wh_roots(kPaperKou, 6.0)) CHECK(std::abs(q(z)) < 1e-9);
}

TEST_CASE("supremum law") {
    const auto bm = supremum_law(LevyModel::brownian(0.0, 1.0), 0.5);
    REQUIRE(bm.terms.size() == 1);
    CHECK(bm.terms[0].weight == 1.0);
    CHECK(bm.terms[0].rate == 1.0);

    const auto sn = supremum_law(LevyModel::spectrally_negative(2.0), 1.0);
    REQUIRE(sn.terms.size() == 1);
    CHECK(sn.terms[0].rate == 2.0);

    const auto kou = supremum_law(kPaperKou, 6.0);
    REQUIRE(kou.terms.size() == 2);
    CHECK(std::abs(kou.terms[0].weight - 0.5656) <= 5e-4);
    CHECK(std::abs(kou.terms[1].weight - 0.4344) <= 5e-4);
    CHECK(std::abs(kou.terms[0].weight + kou.terms[1].weight - 1.0) <= 1e-12);
    CHECK(kou.tail(0.0) == doctest::Approx(1.0));

    SUBCASE("weights use the up-jump rate when the jump rates differ") {
        // A mixture with negative E M would come out of the down-rate variant.
        const auto m = LevyModel::kou(-0.5, 0.5, 2.0, 1.0, 3.0, 1.0);
        const auto law = supremum_law(m, 1.0);
        for (const auto& t : law.terms) CHECK(t.weight > 0.0);
        CHECK(moments(law, 1)[1] == doctest::Approx(0.43714685744814585).epsilon(1e-9));
    }

    SUBCASE("random Kou laws are proper densities") {
        std::mt19937_64 gen(31);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        for (int i = 0; i < 200; ++i) {
            const auto m = LevyModel::kou(-2.0 + 4.0 * u(gen), 0.2 + 2.0 * u(gen), 3.0 * u(gen),
                                          3.0 * u(gen), 0.5 + 5.0 * u(gen), 0.5 + 5.0 * u(gen));
            const auto law = supremum_law(m, 0.05 + 8.0 * u(gen));
            CHECK(std::abs(law.terms[0].weight + law.terms[1].weight - 1.0) <= 1e-12);
            CHECK(law.density(0.0) >= 0.0);
            CHECK(law.terms[0].rate < law.terms[1].rate);
        }
    }

    SUBCASE("validation rejects malformed mixtures") {
        CHECK_THROWS_AS((SupremumLaw{{{0.5, 1.0}, {0.4, 2.0}}}.validate()), NumericalError);
        CHECK_THROWS_AS((SupremumLaw{{{0.5, 2.0}, {0.5, 1.0}}}.validate()), NumericalError);
        CHECK_THROWS_AS((SupremumLaw{{{-0.5, 1.0}, {1.5, 2.0}}}.validate()), NumericalError);
        CHECK_NOTHROW((SupremumLaw{{{1.5, 1.0}, {-0.5, 2.0}}}.validate()));
    }
}

TEST_CASE("moments") {
    const auto exp1 = supremum_law(LevyModel::brownian(0.0, 1.0), 0.5);
    const auto mu = moments(exp1, 4);
    CHECK(mu == std::vector<double>{1.0, 1.0, 2.0, 6.0, 24.0});
    CHECK(moments(supremum_law(kPaperKou, 6.0), 0) == std::vector<double>{1.0});

    const auto kou = supremum_law(kPaperKou, 6.0);
    const double mu1 = moments(kou, 1)[1];
    CHECK(std::abs(mu1 - 0.5459) <= 1e-3);
    // truncated mean on [0, 50] misses a tail below 1e-30
    CHECK(mu1 == doctest::Approx(oracle::truncated_mean(terms_of(kou), 50.0)).epsilon(1e-12));

    SUBCASE("agree with quadrature up to order 8") {
        std::mt19937_64 gen(37);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        for (int i = 0; i < 20; ++i) {
            const auto m = LevyModel::kou(-1.0 + 2.0 * u(gen), 0.3 + u(gen), 2.0 * u(gen), 2.0 * u(gen),
                                          1.0 + 3.0 * u(gen), 1.0 + 3.0 * u(gen));
            const auto law = supremum_law(m, 0.2 + 4.0 * u(gen));
            const auto mu_k = moments(law, 8);
            for (int k = 0; k <= 8; ++k) {
                const double q = oracle::moment(terms_of(law), k);
                CHECK(std::abs(mu_k[static_cast<std::size_t>(k)] - q) <= 1e-8 * std::abs(q));
            }
        }
    }
}
