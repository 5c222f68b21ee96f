#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>

#include <boost/math/distributions/chi_squared.hpp>

#include "helpers.hpp"
#include "levyexit/sampler.hpp"

using namespace levyexit;
using namespace levyexit::testing;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

const LevyModel kMa = fv_model(0, atoms({{-2, 1}}), +1);

PlanRequest request(double a, double b, double horizon) {
    PlanRequest req;
    req.a = a;
    req.b = b;
    req.horizon = horizon;
    return req;
}
}  // namespace

TEST_CASE("plan scheme selection") {
    const SimPlan exact = plan(kMa, request(1, 1, 16));
    CHECK(exact.scheme == Scheme::ExactFiniteActivity);
    CHECK_FALSE(exact.dt.has_value());
    CHECK_FALSE(exact.delta.has_value());

    const SimPlan grid = plan(fv_model(1, MeasureSpec{}, 0), request(1, 1, 16));
    CHECK(grid.scheme == Scheme::GridDiffusion);
    CHECK(grid.dt == 1e-4);

    const SimPlan trunc =
        plan(iv_model(0, power_measure({1, 1.5, 0}, {1, 1.5, 0}), 0), request(1, 1, 16));
    CHECK(trunc.scheme == Scheme::TruncatedInfiniteActivity);
    CHECK(trunc.gaussian_substitution);
    CHECK(trunc.dt == 1e-4);
    REQUIRE(trunc.delta.has_value());
    // substitution regime: sigma(delta) >= 10 delta at the chosen level
    const double s = std::sqrt(truncated_second_moment(
        power_measure({1, 1.5, 0}, {1, 1.5, 0}), *trunc.delta));
    CHECK(s >= 10 * *trunc.delta);

    // without substitution the cut mass must be statistically invisible
    PlanRequest req = request(1, 1, 16);
    req.hints.gaussian_substitution = false;
    const SimPlan dropped = plan(fv_model(0, power_pos(1, 0.5, 1), 0), req);
    REQUIRE(dropped.delta.has_value());
    CHECK_FALSE(dropped.dt.has_value());  // no gaussian part anywhere
    CHECK(std::sqrt(16 * truncated_second_moment(power_pos(1, 0.5, 1), *dropped.delta)) <
          1e-3);

    // hints win; incompatible hints are refused
    PlanRequest forced = request(1, 1, 16);
    forced.hints.scheme = Scheme::ExactFiniteActivity;
    CHECK_THROWS_AS((void)plan(fv_model(1, MeasureSpec{}, 0), forced), Error);
    forced.hints.scheme = Scheme::GridDiffusion;
    const SimPlan forced_grid = plan(kMa, forced);
    CHECK(forced_grid.scheme == Scheme::GridDiffusion);
}

TEST_CASE("substitute_model keeps the triplet honest") {
    CHECK_THROWS_AS((void)substitute_model(kMa, 0.1), Error);
    try {
        (void)substitute_model(kMa, 0.1);
    } catch (const Error& e) {
        CHECK(e.code() == Errc::NotInfiniteActivity);
    }

    // finite-variation tempered tail: rate via the erfc closed form, slope kept
    const LevyModel temp = fv_model(0, power_pos(1, 0.5, 1), 0.7);
    const LevyModel surr = substitute_model(temp, 0.1, true);
    validate(surr);
    CHECK(gamma0(surr) == 0.7);
    const double want_rate =
        2.0 * (std::exp(-0.1) / std::sqrt(0.1) - std::sqrt(M_PI) * std::erfc(std::sqrt(0.1)));
    CHECK(tail_rate(surr.measure, 0.0) == doctest::Approx(want_rate).epsilon(1e-9));
    CHECK(surr.sigma2 == doctest::Approx(truncated_second_moment(temp.measure, 0.1)));

    const LevyModel dropped = substitute_model(temp, 0.1, false);
    CHECK(dropped.sigma2 == 0.0);
    CHECK(dropped.measure == surr.measure);

    // infinite variation: the cut band's compensator moves into the slope
    const LevyModel heavy = iv_model(0, power_pos(1, 1.5, 0), 0.3);
    const LevyModel hsurr = substitute_model(heavy, 0.1, true);
    validate(hsurr);
    const double band = 2.0 * (std::pow(0.1, -0.5) - 1.0);  // int_{0.1}^{1} x^{-3/2} x dx
    CHECK(gamma0(hsurr) == doctest::Approx(0.3 - band).epsilon(1e-12));

    // symmetric infinite-variation models stay driftless
    const LevyModel sym = iv_model(0, power_measure({1, 1.5, 0}, {1, 1.5, 0}), 0);
    CHECK(gamma0(substitute_model(sym, 0.05, true)) == doctest::Approx(0.0));
}

TEST_CASE("exact scheme: reference model paths follow the closed form") {
    const SimPlan p = plan(kMa, request(1, 1, 16));
    const ExitSimulator sim(kMa, 1, 1, p);
    int ups = 0;
    for (std::uint64_t path = 0; path < 20000; ++path) {
        const ExitRecord rec = sim.run({2024, path});
        if (rec.kind == ExitRecord::Kind::Up) {
            // only the no-jump-by-t=1 path exits up, exactly at the boundary
            CHECK(rec.time == 1.0);
            CHECK(rec.value == 1.0);
            ++ups;
        } else {
            REQUIRE(rec.kind == ExitRecord::Kind::Down);
            CHECK(rec.time < 1.0);
            CHECK(rec.value == rec.time - 2.0);  // drift position tau plus the -2 jump
        }
    }
    // P(up) = e^{-1}; allow 4 sigma at n = 20000
    CHECK(static_cast<double>(ups) / 20000 == doctest::Approx(std::exp(-1.0)).epsilon(0.04));
}

TEST_CASE("pure drift paths are deterministic") {
    const LevyModel up = fv_model(0, MeasureSpec{}, 1);
    const SimPlan p = plan(up, request(2, 1, 10));
    for (std::uint64_t path = 0; path < 32; ++path) {
        const ExitRecord rec = simulate_exit(up, 2, 1, p, {7, path});
        CHECK(rec == ExitRecord{ExitRecord::Kind::Up, 2.0, 2.0, Scheme::ExactFiniteActivity});
    }
    const LevyModel down = fv_model(0, MeasureSpec{}, -0.5);
    const ExitRecord rec = simulate_exit(down, 2, 1, plan(down, request(2, 1, 10)), {7, 0});
    CHECK(rec == ExitRecord{ExitRecord::Kind::Down, 2.0, -1.0, Scheme::ExactFiniteActivity});
}

TEST_CASE("zero process censors at the horizon") {
    const LevyModel zero = fv_model(0, MeasureSpec{}, 0);
    const ExitRecord rec = simulate_exit(zero, 1, 1, plan(zero, request(1, 1, 5)), {7, 1});
    CHECK(rec.kind == ExitRecord::Kind::Censored);
    CHECK(rec.time == 5.0);
    CHECK(rec.value == 0.0);
}

TEST_CASE("identical streams replay bit-identical records") {
    const LevyModel models[] = {kMa, fv_model(0.8, atoms({{-0.4, 2}}), 0.3),
                                iv_model(0, power_measure({1, 1.5, 0}, {1, 1.5, 0}), 0)};
    for (const LevyModel& model : models) {
        PlanRequest req = request(0.7, 1.1, 4);
        req.hints.dt = 1e-3;
        const SimPlan p = plan(model, req);
        const ExitSimulator sim1(model, 0.7, 1.1, p);
        const ExitSimulator sim2(model, 0.7, 1.1, p);
        for (std::uint64_t path = 0; path < 64; ++path)
            CHECK(sim1.run({99, path}) == sim2.run({99, path}));
    }
}

TEST_CASE("jump counts over a fixed window pass a chi-squared test against the jump clock") {
    // annulus too wide to exit, so each trace counts a full Poisson(3) sample
    const LevyModel wide = fv_model(0, atoms({{-2, 1}}), 0);
    SimPlan p;
    p.scheme = Scheme::ExactFiniteActivity;
    p.horizon = 3.0;
    const ExitSimulator sim(wide, 1e9, 1e9, p);

    const int n = 100000;
    std::map<int, int> counts;
    std::vector<TracePoint> trace;
    for (std::uint64_t path = 0; path < n; ++path) {
        trace.clear();
        (void)sim.run({31337, path}, &trace);
        int jumps = 0;
        for (const TracePoint& tp : trace) jumps += tp.tag == 'j';
        ++counts[jumps];
    }

    // pool the tail so every expected bin count stays >= 5
    const double lambda = 3.0;
    std::vector<double> expected;
    std::vector<int> observed;
    double pk = std::exp(-lambda);  // P(N = k)
    double cum = 0;
    for (int k = 0;; ++k) {
        if (k > 0) pk *= lambda / k;
        const double tail_mass = 1.0 - cum;
        if (n * (tail_mass - pk) < 5.0 || n * pk < 5.0) {
            int rest = 0;
            for (const auto& [jumps, c] : counts)
                if (jumps >= k) rest += c;
            expected.push_back(tail_mass * n);
            observed.push_back(rest);
            break;
        }
        expected.push_back(pk * n);
        observed.push_back(counts.count(k) ? counts.at(k) : 0);
        cum += pk;
    }
    double chi2 = 0;
    for (std::size_t i = 0; i < expected.size(); ++i) {
        const double d = observed[i] - expected[i];
        chi2 += d * d / expected[i];
    }
    const double dof = static_cast<double>(expected.size()) - 1;
    const double crit =
        boost::math::quantile(boost::math::chi_squared_distribution<>(dof), 1 - 1e-3);
    CAPTURE(chi2);
    CAPTURE(crit);
    CHECK(chi2 < crit);
}

TEST_CASE("grid scheme on a diffusion crosses both boundaries evenly") {
    const LevyModel bm = fv_model(1, MeasureSpec{}, 0);
    PlanRequest req = request(1, 1, 16);
    req.hints.dt = 1e-3;
    const SimPlan p = plan(bm, req);
    const ExitSimulator sim(bm, 1, 1, p);
    int ups = 0, downs = 0;
    double sum_t = 0;
    const int n = 4000;
    for (std::uint64_t path = 0; path < n; ++path) {
        const ExitRecord rec = sim.run({123, path});
        REQUIRE(rec.kind != ExitRecord::Kind::Censored);
        sum_t += rec.time;
        if (rec.kind == ExitRecord::Kind::Up) {
            ++ups;
            CHECK(rec.value >= 1.0);
        } else {
            ++downs;
            CHECK(rec.value <= -1.0);
        }
    }
    CHECK(ups + downs == n);
    CHECK(static_cast<double>(ups) / n == doctest::Approx(0.5).epsilon(0.06));
    CHECK(sum_t / n == doctest::Approx(1.0).epsilon(0.08));
}

TEST_CASE("grid scheme superposes compound jumps") {
    // drift-free diffusion with a strong negative jump load drifts the exits down
    const LevyModel mix = fv_model(0.25, atoms({{-0.8, 2.0}}), 0.0);
    PlanRequest req = request(0.6, 0.6, 16);
    req.hints.dt = 1e-3;
    const SimPlan p = plan(mix, req);
    const ExitSimulator sim(mix, 0.6, 0.6, p);
    int downs = 0;
    const int n = 3000;
    for (std::uint64_t path = 0; path < n; ++path) {
        const ExitRecord rec = sim.run({5150, path});
        REQUIRE(rec.kind != ExitRecord::Kind::Censored);
        downs += rec.kind == ExitRecord::Kind::Down;
    }
    CHECK(static_cast<double>(downs) / n > 0.75);
}

TEST_CASE("truncated scheme without substitution runs event-driven on the surrogate") {
    const LevyModel temp = fv_model(0, power_pos(1, 0.5, 1), -1.2);
    PlanRequest req = request(0.5, 0.5, 8);
    req.hints.gaussian_substitution = false;
    req.hints.delta = 0.01;
    const SimPlan p = plan(temp, req);
    CHECK(p.scheme == Scheme::TruncatedInfiniteActivity);
    CHECK_FALSE(p.dt.has_value());
    const ExitSimulator sim(temp, 0.5, 0.5, p);
    int ups = 0, downs = 0;
    for (std::uint64_t path = 0; path < 2000; ++path) {
        const ExitRecord rec = sim.run({808, path});
        if (rec.kind == ExitRecord::Kind::Up) {
            ++ups;
            CHECK(rec.value >= 0.5);
        } else if (rec.kind == ExitRecord::Kind::Down) {
            ++downs;
            CHECK(rec.value <= -0.5);
        }
        CHECK(rec.scheme == Scheme::TruncatedInfiniteActivity);
    }
    CHECK(ups > 100);  // jumps push up
    CHECK(downs > 100);  // drift pulls down
}

TEST_CASE("trace layout") {
    std::vector<TracePoint> trace;
    const SimPlan p = plan(kMa, request(1, 1, 16));
    const ExitRecord rec = simulate_exit(kMa, 1, 1, p, {11, 3}, &trace);
    REQUIRE(trace.size() >= 2);
    CHECK(trace.front().tag == 's');
    CHECK(trace.front().t == 0.0);
    const char last = trace.back().tag;
    if (rec.kind == ExitRecord::Kind::Up) CHECK(last == 'x');
    CHECK((last == 'x' || last == 'j' || last == 'c'));
}
