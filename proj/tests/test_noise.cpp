#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "deconv/noise.hpp"

using namespace deconv;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("presets carry the published smoothness parameters") {
    const NoiseModel lap = NoiseModel::laplace(0.7);
    CHECK(lap.gamma == 2.0);
    CHECK(lap.kappa0 == 0.5);
    CHECK(lap.mu == 0.0);
    CHECK(lap.delta == 0.0);
    const NoiseModel gau = NoiseModel::gaussian(0.7);
    CHECK(gau.gamma == 0.0);
    CHECK(gau.kappa0 == 1.0);
    CHECK(gau.mu == 0.5);
    CHECK(gau.delta == 2.0);
    lap.validate();
    gau.validate();
    NoiseModel::none().validate();

    CHECK(NoiseModel::make(NoiseKind::Laplace, 0.0).kind == NoiseKind::NoNoise);
    CHECK_THROWS_AS(NoiseModel::laplace(0.0), std::invalid_argument);
    CHECK_THROWS_AS(NoiseModel::gaussian(-1.0), std::invalid_argument);

    NoiseModel bad = NoiseModel::gaussian(1.0);
    bad.mu = 0.0; // delta>0 with mu=0 breaks the convention
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    NoiseModel bad2 = NoiseModel::laplace(1.0);
    bad2.mu = 0.3; // delta=0 requires mu=0
    CHECK_THROWS_AS(bad2.validate(), std::invalid_argument);
}

TEST_CASE("characteristic functions at reference points") {
    CHECK_THAT(cf(NoiseModel::laplace(1.0), 0.0), WithinAbs(1.0, 0.0));
    CHECK_THAT(cf(NoiseModel::laplace(1.0), std::sqrt(2.0)), WithinRel(0.5, 1e-15));
    CHECK_THAT(cf(NoiseModel::gaussian(1.0), 1.0), WithinRel(0.60653065971263342, 1e-15));
    CHECK(cf(NoiseModel::none(), 123.4) == 1.0);
}

TEST_CASE("characteristic functions are even and bounded by one") {
    for (const NoiseModel& model :
         {NoiseModel::none(), NoiseModel::laplace(1.0), NoiseModel::gaussian(1.0)}) {
        for (double x = 0.0; x <= 1000.0; x += 7.37) {
            const double v = cf(model, x);
            CHECK(std::abs(v) <= 1.0);
            CHECK(cf(model, -x) == v);
        }
    }
}

TEST_CASE("delta1 closed forms and quadrature") {
    CHECK_THAT(delta1(NoiseModel::none(), 3), WithinRel(3.0, 1e-15));

    const double lap_expect = 1.0 + kPi * kPi / 3.0 + kPi * kPi * kPi * kPi / 20.0;
    CHECK_THAT(delta1(NoiseModel::laplace(1.0), 1), WithinRel(lap_expect, 1e-12));

    // generic-quadrature oracle for the Laplace closed form
    double quad = 0.0;
    const int pieces = 20000;
    for (int k = 0; k < pieces; ++k) {
        const double x = -kPi + (k + 0.5) * kTwoPi / pieces;
        const double d = 1.0 / cf(NoiseModel::laplace(1.0), x);
        quad += d * d * kTwoPi / pieces;
    }
    CHECK_THAT(delta1(NoiseModel::laplace(1.0), 1), WithinRel(quad / kTwoPi, 1e-6));

    // (1/2pi) int_{-pi}^{pi} e^{x^2} dx, 25-digit reference
    CHECK_THAT(delta1(NoiseModel::gaussian(1.0), 1), WithinRel(1039.9620363507705, 1e-9));
    CHECK_THAT(delta1_log(NoiseModel::gaussian(1.0), 2), WithinRel(35.81575727300004, 1e-9));
}

TEST_CASE("delta1 overflow is reported with the offending m") {
    const NoiseModel gau = NoiseModel::gaussian(1.0);
    try {
        (void)delta1(gau, 20);
        FAIL("expected overflow");
    } catch (const std::overflow_error& e) {
        CHECK(std::string(e.what()).find("20") != std::string::npos);
    }
    CHECK(std::isfinite(delta1_log(gau, 20)));
}

TEST_CASE("delta1 is strictly increasing in m for sigma > 0") {
    for (double sigma : {0.5, 1.0}) {
        const NoiseModel lap = NoiseModel::laplace(sigma);
        const NoiseModel gau = NoiseModel::gaussian(sigma);
        for (int m = 1; m < 12; ++m) {
            CHECK(delta1_log(lap, m + 1) > delta1_log(lap, m));
            CHECK(delta1_log(gau, m + 1) > delta1_log(gau, m));
        }
    }
}

TEST_CASE("lemma-3 style bound holds for m = 1..20") {
    for (double sigma : {0.5, 1.0}) {
        for (const NoiseModel& model : {NoiseModel::laplace(sigma), NoiseModel::gaussian(sigma)}) {
            const SmoothnessConstants sc = smoothness_constants(model);
            for (int m = 1; m <= 20; ++m) {
                const double L = m;
                const double log_bound =
                    -std::log(kPi * model.kappa0 * model.kappa0 * sc.R) +
                    (1.0 - model.delta) * std::log(kPi * L) +
                    model.gamma * std::log(sigma * sigma * L * L * kPi * kPi + 1.0) +
                    2.0 * model.mu * std::pow(sigma, model.delta) * std::pow(kPi, model.delta) *
                        std::pow(L, model.delta);
                CHECK(delta1_log(model, m) <= log_bound + 1e-12);
            }
        }
    }
}

TEST_CASE("smoothness constants for the built-in kinds") {
    const SmoothnessConstants gau = smoothness_constants(NoiseModel::gaussian(1.0));
    CHECK_THAT(gau.R, WithinRel(1.0, 1e-15));
    CHECK_THAT(gau.lambda1, WithinRel(1.0 / (kPi * kPi), 1e-14));
    CHECK_THAT(gau.penalty_exponent, WithinAbs(2.0, 1e-15));
    CHECK_THAT(gau.lambda2, WithinRel(gau.lambda1, 1e-15));

    const SmoothnessConstants lap = smoothness_constants(NoiseModel::laplace(1.0));
    CHECK_THAT(lap.R, WithinRel(1.0, 1e-15));
    CHECK_THAT(lap.lambda1, WithinRel(4.0 * std::pow(kPi * kPi + 1.0, 2.0), 1e-14));
    CHECK(lap.penalty_exponent == 0.0);
    CHECK(lap.lambda2 == 0.0);

    CHECK_THAT(smoothness_constants(NoiseModel::none()).lambda1, WithinRel(1.0, 1e-15));
}

TEST_CASE("smoothness constants, synthetic 1/3 <= delta <= 1 branch") {
    NoiseModel syn = NoiseModel::laplace(1.0); // norm lookup keys off the kind
    syn.gamma = 1.0;
    syn.kappa0 = 1.0;
    syn.delta = 0.5;
    syn.mu = 1.0;
    const SmoothnessConstants sc = smoothness_constants(syn);
    CHECK_THAT(sc.R, WithinRel(1.0, 1e-15)); // 2*mu*delta*sigma^delta
    CHECK_THAT(sc.lambda1, WithinRel(6.132517580379464, 1e-12));
    CHECK_THAT(sc.lambda2, WithinRel(1.9367066293127656, 1e-12));
    CHECK_THAT(sc.penalty_exponent, WithinAbs(0.25, 1e-15));

    // exponent vanishes exactly up to delta = 1/3
    NoiseModel third = syn;
    third.delta = 1.0 / 3.0;
    CHECK(smoothness_constants(third).penalty_exponent == 0.0);
    third.delta = 0.34;
    CHECK(smoothness_constants(third).penalty_exponent > 0.0);
}

TEST_CASE("noise density norms match quadrature") {
    const int pieces = 400000;
    double lap = 0.0, gau = 0.0;
    for (int k = 0; k < pieces; ++k) {
        const double x = -40.0 + (k + 0.5) * 80.0 / pieces;
        const double fl = std::exp(-std::sqrt(2.0) * std::abs(x)) / std::sqrt(2.0);
        const double fg = std::exp(-0.5 * x * x) / std::sqrt(kTwoPi);
        lap += fl * fl * 80.0 / pieces;
        gau += fg * fg * 80.0 / pieces;
    }
    CHECK_THAT(fe_l2_norm(NoiseKind::Laplace), WithinRel(std::sqrt(lap), 1e-6));
    CHECK_THAT(fe_l2_norm(NoiseKind::Gaussian), WithinRel(std::sqrt(gau), 1e-6));
    CHECK_THROWS_AS(fe_l2_norm(NoiseKind::NoNoise), std::invalid_argument);
}

TEST_CASE("m_max clamps the theoretical cap into [8, min(user,50)]") {
    CHECK(m_max(NoiseModel::none(), 100) == 31);          // floor(100/pi)
    CHECK(m_max(NoiseModel::laplace(1.0), 1000) == 8);    // theoretical 1, clamped up
    CHECK(m_max(NoiseModel::none(), 1000000, 20) == 20);  // user cap dominates
    CHECK(m_max(NoiseModel::gaussian(1.0), 1000000) <= 50);
    CHECK(m_max(NoiseModel::laplace(0.5), 500, 1) == 1);  // explicit cap below the floor

    for (const NoiseModel& model : {NoiseModel::laplace(0.5), NoiseModel::gaussian(0.5)}) {
        int prev = 0;
        for (long n : {10L, 100L, 1000L, 100000L, 10000000L}) {
            const int cur = m_max(model, n);
            CHECK(cur >= prev);
            prev = cur;
        }
    }
}
