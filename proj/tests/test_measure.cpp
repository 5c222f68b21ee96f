#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "oracles.hpp"
#include "levyexit/measure.hpp"

using namespace levyexit;
using namespace levyexit::testing;

TEST_CASE("charges reads half-line mass structurally") {
    const MeasureSpec neg_atom = atoms({{-2, 1}});
    CHECK_FALSE(charges(neg_atom, Side::Pos));
    CHECK(charges(neg_atom, Side::Neg));
    CHECK_FALSE(charges(power_pos(1, 0.5, 1), Side::Neg));
    CHECK(charges(power_pos(1, 0.5, 1), Side::Pos));
    CHECK_FALSE(charges(MeasureSpec{}, Side::Neg));
    CHECK(charges(cp_uniform(1, -1, 2), Side::Neg));
    CHECK(charges(cp_uniform(1, -1, 2), Side::Pos));
    CHECK_FALSE(charges(cp_uniform(1, 0, 2), Side::Neg));
    CHECK(charges(sum_measure({neg_atom, cp_exp(1, 1, Side::Pos)}), Side::Pos));
    // a restriction can silence a side entirely
    CHECK_FALSE(charges(restricted(atoms({{-0.2, 1}, {3, 1}}), 0.5), Side::Neg));
    CHECK(charges(restricted(atoms({{-0.2, 1}, {3, 1}}), 0.5), Side::Pos));
}

TEST_CASE("small-jump variation by family") {
    CHECK_FALSE(small_jump_variation_finite(power_pos(1, 1.5, 0)));
    CHECK(small_jump_variation_finite(power_pos(1, 0.5, 1)));
    CHECK_FALSE(small_jump_variation_finite(power_pos(1, 1.0, 1)));  // alpha = 1 diverges
    CHECK(small_jump_variation_finite(atoms({{-2, 1}})));
    CHECK(small_jump_variation_finite(cp_exp(3, 0.5, Side::Neg)));
    CHECK_FALSE(small_jump_variation_finite(sum_measure({atoms({{1, 1}}), power_pos(1, 1.7, 0)})));
    CHECK(small_jump_variation_finite(restricted(power_pos(1, 1.7, 0), 0.1)));
}

TEST_CASE("finite activity by family") {
    CHECK(finite_activity(atoms({{-2, 1}})));
    CHECK(finite_activity(cp_uniform(2, -1, 1)));
    CHECK_FALSE(finite_activity(power_pos(1, 0.5, 1)));  // infinite mass at the origin
    CHECK_FALSE(finite_activity(power_pos(1, 0, 1)));
    CHECK(finite_activity(restricted(power_pos(1, 0.5, 1), 0.01)));
}

TEST_CASE("negative support edge") {
    const auto w1 = negative_support_sup(atoms({{-2, 1}}));
    REQUIRE(w1.has_value());
    CHECK(w1->w == 2.0);
    CHECK_FALSE(w1->zero_in_support);

    const auto w2 = negative_support_sup(cp_exp(1, 1, Side::Neg));
    REQUIRE(w2.has_value());
    CHECK(w2->w == 0.0);
    CHECK(w2->zero_in_support);

    CHECK_FALSE(negative_support_sup(atoms({{+1, 1}})).has_value());
    CHECK_FALSE(negative_support_sup(MeasureSpec{}).has_value());

    // uniform wholly below zero: edge at the upper end of the interval
    const auto w3 = negative_support_sup(cp_uniform(1, -3, -0.5));
    REQUIRE(w3.has_value());
    CHECK(w3->w == 0.5);

    // a restriction pushes the edge outward
    const auto w4 = negative_support_sup(restricted(cp_exp(1, 1, Side::Neg), 0.25));
    REQUIRE(w4.has_value());
    CHECK(w4->w == 0.25);
    CHECK_FALSE(w4->zero_in_support);
}

TEST_CASE("zero_in_support per side") {
    CHECK_FALSE(zero_in_support(atoms({{-2, 1}}), Side::Neg));
    CHECK(zero_in_support(cp_exp(1, 1, Side::Pos), Side::Pos));
    CHECK_FALSE(zero_in_support(MeasureSpec{}, Side::Neg));
    CHECK(zero_in_support(cp_uniform(1, -1, 2), Side::Neg));
    CHECK(zero_in_support(cp_uniform(1, -1, 0), Side::Neg));
    CHECK_FALSE(zero_in_support(cp_uniform(1, 0.5, 2), Side::Pos));
    CHECK(zero_in_support(power_neg(1, 1.2, 0), Side::Neg));
}

TEST_CASE("truncated second moment closed forms") {
    CHECK(truncated_second_moment(atoms({{-2, 1}}), 1.0) == 0.0);
    CHECK(truncated_second_moment(atoms({{-2, 1}}), 2.5) == doctest::Approx(4.0));
    CHECK(truncated_second_moment(MeasureSpec{}, 0.1) == 0.0);
    CHECK(truncated_second_moment(power_pos(1, 0.5, 0), 1.0) == doctest::Approx(2.0 / 3));

    // exponential jumps: int_0^d x^2 e^{-x/s}/s dx against naive Riemann sum
    const MeasureSpec ej = cp_exp(2.0, 0.7, Side::Neg);
    double riemann = 0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        const double x = (i + 0.5) * (0.9 / n);
        riemann += x * x * std::exp(-x / 0.7) / 0.7 * (0.9 / n);
    }
    CHECK(truncated_second_moment(ej, 0.9) == doctest::Approx(2.0 * riemann).epsilon(1e-6));

    // uniform straddling zero
    const MeasureSpec uj = cp_uniform(3.0, -1.0, 2.0);
    // int over (-0.5, 0.5) of x^2/3 dx = (2/3)(0.125)/3
    CHECK(truncated_second_moment(uj, 0.5) ==
          doctest::Approx(3.0 * (0.125 + 0.125) / 3.0 / 3.0));
}

TEST_CASE("tempered power-law rates against the series oracle") {
    struct Case {
        double alpha, theta, delta;
    };
    const Case cases[] = {{0.5, 1.0, 1.0}, {0.5, 1.0, 0.03}, {1.5, 2.0, 0.3},
                          {0.0, 1.0, 0.2},  {1.0, 0.7, 0.5},  {1.9, 0.3, 0.8},
                          {0.3, 3.0, 0.05}};
    for (const Case& c : cases) {
        CAPTURE(c.alpha);
        CAPTURE(c.theta);
        CAPTURE(c.delta);
        const double got = tail_rate(power_pos(1.0, c.alpha, c.theta), c.delta, Side::Pos);
        const double want = power_tail_oracle(c.alpha, c.theta, c.delta);
        CHECK(got == doctest::Approx(want).epsilon(1e-8));
    }
    // the worked closed form: int_1^inf x^{-3/2} e^{-x} dx = 2(e^{-1} - sqrt(pi) erfc(1))
    const double closed = 2.0 * (std::exp(-1.0) - std::sqrt(M_PI) * std::erfc(1.0));
    CHECK(tail_rate(power_pos(1, 0.5, 1), 1.0, Side::Pos) ==
          doctest::Approx(closed).epsilon(1e-9));
}

TEST_CASE("tempered second moments against the series oracle") {
    struct Case {
        double alpha, theta, delta;
    };
    const Case cases[] = {{0.5, 1.0, 0.5}, {1.5, 2.0, 0.4}, {0.0, 1.5, 1.0}, {1.0, 0.5, 0.7}};
    for (const Case& c : cases) {
        const double got = truncated_second_moment(power_pos(1.0, c.alpha, c.theta), c.delta);
        const double want = power_x2_oracle(c.alpha, c.theta, c.delta);
        CHECK(got == doctest::Approx(want).epsilon(1e-8));
    }
}

TEST_CASE("signed mean between bounds") {
    CHECK(signed_mean_between(atoms({{-2, 1}, {1, 3}}), 0.5, 3.0) == doctest::Approx(1.0));
    CHECK(signed_mean_between(atoms({{-2, 1}, {1, 3}}), 1.5, 3.0) == doctest::Approx(-2.0));
    // symmetric measures cancel
    PowerLawMeasure sym;
    sym.neg = {1, 1.5, 0};
    sym.pos = {1, 1.5, 0};
    CHECK(signed_mean_between(MeasureSpec{sym}, 0.1, 1.0) == doctest::Approx(0.0).epsilon(1e-12));
    // one-sided power law, theta = 0 closed form: int_l^h x^{-3/2} dx = 2(l^{-1/2} - h^{-1/2})
    CHECK(signed_mean_between(power_pos(1, 1.5, 0), 0.25, 1.0) == doctest::Approx(2.0));
}

TEST_CASE("tail rate monotone nonincreasing, second moment nondecreasing in delta") {
    const MeasureSpec specs[] = {
        atoms({{-2, 1}, {0.4, 2}}), cp_uniform(2, -1.5, 0.7), cp_exp(1, 2, Side::Pos),
        power_pos(1, 0.5, 1),       power_measure({0.5, 1.2, 0.3}, {2, 0.2, 2}),
        sum_measure({atoms({{0.05, 1}}), power_neg(1, 0, 1)}),
    };
    const double grid[] = {1e-3, 0.01, 0.1, 0.3, 0.5, 1.0};
    for (const MeasureSpec& m : specs) {
        double prev_rate = std::numeric_limits<double>::infinity();
        double prev_tsm = -1;
        for (double d : grid) {
            const double r = tail_rate(m, d);
            const double s2 = truncated_second_moment(m, d);
            CHECK(r <= prev_rate + 1e-12 * (1 + std::abs(prev_rate)));
            CHECK(s2 >= prev_tsm - 1e-12);
            prev_rate = r;
            prev_tsm = s2;
        }
    }
}

TEST_CASE("charges agrees with per-side tail rates at probe deltas") {
    const MeasureSpec specs[] = {
        atoms({{-2, 1}}),
        atoms({{0.05, 1}}),
        cp_uniform(1, -1, 2),
        cp_exp(2, 0.5, Side::Neg),
        power_pos(1, 0.5, 1),
        sum_measure({atoms({{-0.3, 2}}), power_pos(1, 1.5, 0)}),
        restricted(cp_uniform(1, -1, 2), 0.25),
        MeasureSpec{},
    };
    for (const MeasureSpec& m : specs) {
        for (Side s : {Side::Neg, Side::Pos}) {
            const bool probe = tail_rate(m, 1.0, s) > 0 || tail_rate(m, 1e-3, s) > 0;
            CHECK(charges(m, s) == probe);
        }
    }
}

TEST_CASE("mirroring swaps sides and preserves scale quantities") {
    const MeasureSpec specs[] = {
        atoms({{-2, 1}, {0.4, 2}}),
        cp_uniform(2, -1.5, 0.7),
        MeasureSpec{CompoundPoisson{
            1.5, MixtureJump{0.25, ExponentialJump{1, Side::Neg}, UniformJump{0.2, 1.0}}}},
        power_measure({0.5, 1.2, 0.3}, {2, 0.2, 2}),
        sum_measure({atoms({{0.05, 1}}), power_neg(1, 0, 1)}),
        restricted(cp_exp(1, 1, Side::Neg), 0.25),
    };
    for (const MeasureSpec& m : specs) {
        const MeasureSpec mm = mirror(m);
        validate(mm);
        CHECK(charges(mm, Side::Neg) == charges(m, Side::Pos));
        CHECK(charges(mm, Side::Pos) == charges(m, Side::Neg));
        CHECK(small_jump_variation_finite(mm) == small_jump_variation_finite(m));
        CHECK(finite_activity(mm) == finite_activity(m));
        CHECK(truncated_second_moment(mm, 0.4) ==
              doctest::Approx(truncated_second_moment(m, 0.4)).epsilon(1e-12));
        CHECK(tail_rate(mm, 0.2, Side::Neg) ==
              doctest::Approx(tail_rate(m, 0.2, Side::Pos)).epsilon(1e-12));
        CHECK(signed_mean_between(mm, 0.1, 1.0) ==
              doctest::Approx(-signed_mean_between(m, 0.1, 1.0)).epsilon(1e-12));
        const auto gap_m = support_gap(m, Side::Neg);
        const auto gap_mm = support_gap(mm, Side::Pos);
        CHECK(gap_m.has_value() == gap_mm.has_value());
        if (gap_m) CHECK(*gap_m == *gap_mm);
        CHECK(mirror(mm) == m);
    }
}

TEST_CASE("large_jump_law: atoms rates and frequencies") {
    const auto law = large_jump_law(atoms({{-2, 1}, {1, 3}}), 0.0);
    CHECK(law.rate == doctest::Approx(4.0));
    Philox rng(9001, 0);
    int pos = 0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) pos += law.sampler(rng) > 0;
    const double freq = static_cast<double>(pos) / n;
    CHECK(freq > 0.74);
    CHECK(freq < 0.76);
}

TEST_CASE("large_jump_law: zero measure never draws") {
    const auto law = large_jump_law(MeasureSpec{}, 0.0);
    CHECK(law.rate == 0.0);
    CHECK(law.sampler.empty());
}

TEST_CASE("large_jump_law rejects delta 0 on infinite activity") {
    CHECK_THROWS_AS((void)large_jump_law(power_pos(1, 0.5, 1), 0.0), Error);
    try {
        (void)large_jump_law(power_pos(1, 0.5, 1), 0.0);
    } catch (const Error& e) {
        CHECK(e.code() == Errc::InfiniteRate);
    }
}

TEST_CASE("restricted uniform sampler stays off the cut band") {
    const auto law = large_jump_law(cp_uniform(3.0, -1.0, 2.0), 0.5);
    CHECK(law.rate == doctest::Approx(3.0 * (0.5 + 1.5) / 3.0));
    Philox rng(5, 5);
    int pos = 0;
    const int n = 50000;
    for (int i = 0; i < n; ++i) {
        const double x = law.sampler(rng);
        CHECK(std::abs(x) >= 0.5);
        CHECK(x >= -1.0);
        CHECK(x <= 2.0);
        pos += x > 0;
    }
    CHECK(static_cast<double>(pos) / n == doctest::Approx(0.75).epsilon(0.02));
}

TEST_CASE("restricted exponential sampler is a shifted exponential") {
    const auto law = large_jump_law(cp_exp(1.0, 2.0, Side::Pos), 1.0);
    CHECK(law.rate == doctest::Approx(std::exp(-0.5)));
    Philox rng(6, 6);
    double sum = 0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        const double x = law.sampler(rng);
        CHECK(x >= 1.0);
        sum += x;
    }
    CHECK(sum / n == doctest::Approx(3.0).epsilon(0.01));
}

TEST_CASE("tempered tail sampler matches closed-form conditional moments") {
    // alpha = 1/2, theta = 1, floor = 1/2: moments via erfc identities
    const double delta = 0.5;
    const double g_half = std::sqrt(M_PI) * std::erfc(std::sqrt(delta));
    const double g_minus_half = 2.0 * (std::exp(-delta) / std::sqrt(delta) - g_half);
    const double g_three_half = 0.5 * g_half + std::sqrt(delta) * std::exp(-delta);
    const double mean = g_half / g_minus_half;
    const double second = g_three_half / g_minus_half;

    const auto law = large_jump_law(power_pos(1, 0.5, 1), delta);
    CHECK(law.rate == doctest::Approx(g_minus_half).epsilon(1e-9));

    Philox rng(77, 1);
    double s1 = 0, s2 = 0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        const double x = law.sampler(rng);
        CHECK(x >= delta);
        s1 += x;
        s2 += x * x;
    }
    CHECK(s1 / n == doctest::Approx(mean).epsilon(0.01));
    CHECK(s2 / n == doctest::Approx(second).epsilon(0.02));
}

TEST_CASE("untempered tail sampler has the exact pareto quantiles") {
    const auto law = large_jump_law(power_neg(1, 0.5, 0), 1.0);
    CHECK(law.rate == doctest::Approx(2.0));  // delta^{-alpha}/alpha
    Philox rng(8, 8);
    int beyond_median = 0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
        const double x = law.sampler(rng);
        CHECK(x <= -1.0);
        beyond_median += x < -4.0;  // P(|X| > 4) = 4^{-1/2} = 1/2
    }
    CHECK(static_cast<double>(beyond_median) / n == doctest::Approx(0.5).epsilon(0.02));
}

TEST_CASE("validation rejects malformed specs with field diagnostics") {
    const auto rejects = [](MeasureSpec m, const char* needle) {
        try {
            validate(m);
            FAIL_CHECK("expected a validation failure for " << needle);
        } catch (const Error& e) {
            CHECK(e.code() == Errc::InvalidSpec);
            CHECK(std::string(e.what()).find(needle) != std::string::npos);
        }
    };
    rejects(atoms({{-2, -1}}), "rate");
    rejects(atoms({{0, 1}}), "x");
    rejects(cp_uniform(1, 2, 1), "lo < hi");
    rejects(MeasureSpec{CompoundPoisson{-1, UniformJump{0, 1}}}, "rate");
    rejects(power_pos(1, 2.0, 1), "alpha");
    rejects(power_pos(1, 0.0, 0.0), "theta");
    rejects(power_pos(-1, 0.5, 1), ".c");
    rejects(restricted(atoms({{1, 1}}), 0.0), "min_abs");
    rejects(MeasureSpec{CompoundPoisson{
                1, MixtureJump{0.5, UniformJump{-1, 0.5}, UniformJump{0, 1}}}},
            "(-inf,0]");
    validate(cp_uniform(1, -0.5, 0.5));  // straddling zero is fine
}
