#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "frwave/regimes.hpp"
#include "numeric_oracles.hpp"

using namespace frwave;
using Catch::Approx;

TEST_CASE("assumption 1 sign conditions") {
    const auto quad = ScaleFactorModel::power_law(2.0, 1.0, 4);
    CHECK(check_assumption1(quad, CouplingSpec{0.2}).pass);

    const auto fail = check_assumption1(quad, CouplingSpec{0.1});
    CHECK_FALSE(fail.pass);
    REQUIRE(fail.witness_tau.has_value());
    CHECK(h_of_tau(quad, CouplingSpec{0.1}, *fail.witness_tau) > 0.0);

    // alpha = 2/(D-2): h vanishes identically, any coupling passes.
    const auto rad = ScaleFactorModel::power_law(1.0, 1.0, 4);
    CHECK(check_assumption1(rad, CouplingSpec{-5.0}).pass);
    CHECK(check_assumption1(rad, CouplingSpec{42.0}).pass);

    // Exponential family: pass iff xi >= (D-2)/(4(D-1)), non-strict.
    const auto e = ScaleFactorModel::exponential(1.3, 0.5, 4);
    CHECK(check_assumption1(e, CouplingSpec{xi_threshold(4) + 0.01}).pass);
    CHECK(check_assumption1(e, CouplingSpec{xi_threshold(4)}).pass);
    CHECK_FALSE(check_assumption1(e, CouplingSpec{xi_threshold(4) - 0.01}).pass);
}

TEST_CASE("perturbation integral closed forms") {
    const auto rad4 = ScaleFactorModel::power_law(1.0, 1.0, 4);
    const auto a5 = a_integral(rad4, 5.0);
    CHECK(a5.converges);
    CHECK(a5.value == Approx(1.0).epsilon(1e-13));

    // Exponent -1: logarithmic divergence, boundary excluded.
    CHECK_FALSE(a_integral(rad4, 4.0).converges);

    const auto exp_bg = ScaleFactorModel::exponential(1.0, 0.0, 4);
    const auto ae = a_integral(exp_bg, 5.0);
    CHECK(ae.converges);
    CHECK(ae.value == Approx(0.5).epsilon(1e-13));

    CHECK_THROWS_AS(a_integral(rad4, 0.0), InvalidParameters);
}

TEST_CASE("classification of the worked examples") {
    const auto matter = classify(4, BackgroundInput::by_w(0.0), 0.2, 4.0, 1.0);
    CHECK(matter.case_label == CaseLabel::III);
    CHECK(matter.admissible);
    REQUIRE(matter.p_bound.has_value());
    CHECK(matter.p_bound->direction == '>');
    CHECK(matter.p_bound->value == Approx(3.5).epsilon(1e-14));
    REQUIRE(matter.xi_bound.has_value());
    CHECK(matter.xi_bound->direction == '>');
    CHECK(matter.xi_bound->value == Approx(1.0 / 6.0).epsilon(1e-14));

    const auto lambda = classify(4, BackgroundInput::by_w(-1.0), 0.5, 1.5, 1.0);
    CHECK(lambda.case_label == CaseLabel::I);
    CHECK(lambda.admissible);
    REQUIRE(lambda.p_bound.has_value());
    CHECK(lambda.p_bound->direction == '<');
    CHECK(lambda.p_bound->value == Approx(2.0).epsilon(1e-14));

    const auto d6 = classify(6, BackgroundInput::by_w(0.0), 0.3, 3.0, 1.0);
    CHECK(d6.case_label == CaseLabel::III);
    CHECK(d6.alpha == Approx(2.0 / 3.0).epsilon(1e-14));
    REQUIRE(d6.p_bound.has_value());
    CHECK(d6.p_bound->value == Approx(11.0 / 4.0).epsilon(1e-13));
    CHECK(d6.admissible);

    CHECK_THROWS_AS(classify(3, BackgroundInput::by_w(0.0), 0.2, 4.0, 1.0),
                    InvalidParameters);
    CHECK_THROWS_AS(classify(4, BackgroundInput::by_w(0.0), 0.2, -1.0, 1.0),
                    InvalidParameters);
    CHECK_THROWS_AS(classify(4, BackgroundInput::by_w(0.0), 0.2, 4.0, 0.0),
                    InvalidParameters);
}

TEST_CASE("boundary conventions") {
    // h == 0 passes the non-strict assumption for any coupling; the table
    // bound stays strict (reported, not enforced).
    const auto caseiv = classify(4, BackgroundInput::by_alpha(1.0), -3.0, 5.0, 1.0);
    CHECK(caseiv.case_label == CaseLabel::IV);
    CHECK(caseiv.assumption1.pass);
    CHECK_FALSE(caseiv.xi_bound.has_value());
    CHECK(caseiv.admissible);

    // Exponent exactly -1 diverges.
    const auto border = classify(4, BackgroundInput::by_alpha(1.0), 0.5, 4.0, 1.0);
    CHECK_FALSE(border.assumption3.converges);
    CHECK_FALSE(border.admissible);

    // Degenerate w selects the exponential case.
    const auto degen = classify(4, BackgroundInput::by_w(-1.0 / 3.0), 0.3, 4.0, 1.0);
    CHECK(degen.case_label == CaseLabel::ExponentialCase);
    CHECK(degen.family == ScaleFamily::Exponential);
    REQUIRE(degen.p_bound.has_value());
    CHECK(degen.p_bound->value == Approx(3.0));  // (D+2)/(D-2) at D = 4
    CHECK(degen.admissible);

    // alpha = 0 backgrounds can never satisfy the integral condition.
    const auto flat = classify(4, BackgroundInput::by_alpha(0.0), 0.3, 5.0, 1.0);
    CHECK(flat.case_label == CaseLabel::Inadmissible);
    CHECK(flat.assumption1.pass);
    CHECK_FALSE(flat.assumption3.converges);
    CHECK_FALSE(flat.admissible);
}

TEST_CASE("four-dimensional table rows reproduce exactly") {
    const auto rows = table_four_dimensional();

    // Matter domination: w = 0, alpha = 2, xi > 1/6, p > 7/2.
    CHECK(rows[0].w == Rational(0));
    CHECK(rows[0].alpha == Rational(2));
    CHECK(rows[0].label == CaseLabel::III);
    REQUIRE(rows[0].xi_bound.has_value());
    CHECK(*rows[0].xi_bound == Rational(1, 6));
    CHECK(rows[0].xi_direction == '>');
    CHECK(rows[0].p_bound == Rational(7, 2));
    CHECK(rows[0].p_direction == '>');

    // Cosmological constant: w = -1, alpha = -1, xi > 1/6, p < 2.
    CHECK(rows[1].w == Rational(-1));
    CHECK(rows[1].alpha == Rational(-1));
    CHECK(rows[1].label == CaseLabel::I);
    REQUIRE(rows[1].xi_bound.has_value());
    CHECK(*rows[1].xi_bound == Rational(1, 6));
    CHECK(rows[1].p_bound == Rational(2));
    CHECK(rows[1].p_direction == '<');

    // Radiation: w = 1/3, alpha = 1, xi unrestricted, p > 4.
    CHECK(rows[2].w == Rational(1, 3));
    CHECK(rows[2].alpha == Rational(1));
    CHECK(rows[2].label == CaseLabel::IV);
    CHECK_FALSE(rows[2].xi_bound.has_value());
    CHECK(rows[2].p_bound == Rational(4));
    CHECK(rows[2].p_direction == '>');

    CHECK(to_string(rows[0].p_bound) == "7/2");
    CHECK(to_string(*rows[0].xi_bound) == "1/6");
    CHECK(to_string(rows[2].p_bound) == "4");
}

TEST_CASE("case II/III bound specializes to the case IV threshold") {
    for (int D = 4; D <= 16; ++D) {
        const Rational alpha_iv(2, D - 2);
        const Rational bound = (Rational(D + 2) + Rational(2) / alpha_iv) / (D - 2);
        CHECK(bound == Rational(2 * D, D - 2));
    }
}

TEST_CASE("symbolic admissibility agrees with the numeric oracle") {
    std::mt19937 rng(911u);
    std::uniform_real_distribution<double> alpha_dist(-3.0, 3.0);
    std::uniform_real_distribution<double> xi_dist(-0.5, 1.0);
    std::uniform_real_distribution<double> p_dist(0.2, 8.0);
    std::uniform_real_distribution<double> tau0_dist(0.2, 3.0);
    std::uniform_real_distribution<double> rate_dist(0.1, 2.0);

    int checked = 0;
    while (checked < 1500) {
        const int D = 4 + static_cast<int>(rng() % 8);
        const double xi = xi_dist(rng);
        const double p = p_dist(rng);
        const double tau0 = tau0_dist(rng);
        const bool exponential = checked % 5 == 4;

        ScaleFactorModel model;
        BackgroundInput input{};
        const double q = 0.5 * (D + 2 - (D - 2) * p);
        if (exponential) {
            const double rate = rate_dist(rng);
            if (std::abs(rate * q) <= 1e-9) continue;
            model = ScaleFactorModel::exponential(rate, tau0, D);
            input = BackgroundInput::by_exp_rate(rate);
        } else {
            const double alpha = alpha_dist(rng);
            if (std::abs(alpha) <= 1e-9) continue;
            if (std::abs(alpha - 2.0 / (D - 2)) <= 1e-9) continue;
            if (std::abs(alpha * q + 1.0) <= 1e-9) continue;
            model = ScaleFactorModel::power_law(alpha, tau0, D);
            input = BackgroundInput::by_alpha(alpha);
        }
        if (std::abs(xi - xi_threshold(D)) <= 1e-9) continue;

        const auto verdict = classify(D, input, xi, p, tau0);
        const bool numeric_a1 = testing::sampled_assumption1(model, CouplingSpec{xi});
        const auto numeric_a3 = testing::quadrature_a_integral(model, p);

        CHECK(verdict.assumption1.pass == numeric_a1);
        CHECK(verdict.assumption3.converges == numeric_a3.converges);
        CHECK(verdict.admissible == (numeric_a1 && numeric_a3.converges));
        if (verdict.assumption3.converges && numeric_a3.converges)
            CHECK(numeric_a3.value ==
                  Approx(verdict.assumption3.value).epsilon(1e-6));
        ++checked;
    }
}
