#include "levyexit/sampler.hpp"

#include <cmath>

namespace levyexit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kDefaultDt = 1e-4;

// Largest delta (halving from 1) at which cutting jumps below delta is
// defensible: either the cut mass is statistically invisible over the
// horizon, or (under substitution) the cut part is deep in the Gaussian
// regime sigma(delta) >= 10 delta.
double auto_delta(const LevyModel& model, const PlanRequest& req, bool gaussian) {
    const double budget = 1e-3 * std::min(req.a, req.b);
    double delta = 1.0;
    for (int i = 0; i < 400; ++i) {
        const double s2 = truncated_second_moment(model.measure, delta);
        if (std::sqrt(req.horizon * s2) < budget) return delta;
        if (gaussian && std::sqrt(s2) >= 10.0 * delta) return delta;
        delta *= 0.5;
    }
    return delta;
}

void trace_point(std::vector<TracePoint>* trace, double t, double x, char tag) {
    if (trace) trace->push_back({t, x, tag});
}

}  // namespace

const char* scheme_name(Scheme s) {
    switch (s) {
        case Scheme::ExactFiniteActivity: return "exact";
        case Scheme::GridDiffusion: return "grid";
        case Scheme::TruncatedInfiniteActivity: return "truncated";
    }
    return "?";
}

SimPlan plan(const LevyModel& model, const PlanRequest& req) {
    validate(model);
    require(std::isfinite(req.horizon) && req.horizon > 0, Errc::InvalidSpec,
            "plan: horizon must be finite and > 0");
    require(req.a > 0 && req.b > 0, Errc::InvalidQuery, "plan: need a > 0 and b > 0");

    const bool fa = finite_activity(model.measure);
    Scheme scheme;
    if (req.hints.scheme)
        scheme = *req.hints.scheme;
    else if (!fa)
        scheme = Scheme::TruncatedInfiniteActivity;
    else
        scheme = model.sigma2 > 0 ? Scheme::GridDiffusion : Scheme::ExactFiniteActivity;

    SimPlan p;
    p.scheme = scheme;
    p.horizon = req.horizon;
    switch (scheme) {
        case Scheme::ExactFiniteActivity:
            require(fa && model.sigma2 == 0, Errc::SchemeMismatch,
                    "exact scheme requires sigma2 = 0 and a finite-activity measure");
            break;
        case Scheme::GridDiffusion:
            require(fa, Errc::SchemeMismatch,
                    "grid scheme requires a finite-activity measure");
            p.dt = req.hints.dt.value_or(kDefaultDt);
            break;
        case Scheme::TruncatedInfiniteActivity:
            require(!fa, Errc::SchemeMismatch,
                    "truncation applies to infinite-activity measures only");
            p.gaussian_substitution = req.hints.gaussian_substitution.value_or(true);
            p.delta = req.hints.delta.value_or(auto_delta(model, req, p.gaussian_substitution));
            if (p.gaussian_substitution || model.sigma2 > 0)
                p.dt = req.hints.dt.value_or(kDefaultDt);
            break;
    }
    return p;
}

LevyModel substitute_model(const LevyModel& model, double delta, bool gaussian_substitution) {
    validate(model);
    require(std::isfinite(delta) && delta > 0, Errc::InvalidSpec,
            "substitute_model: delta must be > 0");
    if (finite_activity(model.measure))
        fail(Errc::NotInfiniteActivity, "substitute_model: model is already finite-activity");

    LevyModel out;
    out.sigma2 = model.sigma2 +
                 (gaussian_substitution ? truncated_second_moment(model.measure, delta) : 0.0);
    out.measure = MeasureSpec{RestrictedMeasure{Box<MeasureSpec>(model.measure), delta}};
    if (small_jump_variation_finite(model.measure)) {
        // zero-truncation drift: removing small jumps needs no compensation
        out.drift = Gamma0{gamma0(model)};
    } else {
        // the surrogate keeps only uncompensated jumps, so the compensator of
        // the cut band [delta,1] moves into the slope
        out.drift = Gamma0{center(model) - signed_mean_between(model.measure, delta, 1.0)};
    }
    return out;
}

ExitSimulator::ExitSimulator(const LevyModel& model, double a, double b, SimPlan plan)
    : plan_(plan), a_(a), b_(b) {
    require(a > 0 && b > 0, Errc::InvalidQuery, "simulate: need a > 0 and b > 0");
    require(std::isfinite(plan.horizon) && plan.horizon > 0, Errc::InvalidSpec,
            "simulate: horizon must be finite and > 0");
    validate(model);

    const bool fa = finite_activity(model.measure);
    switch (plan_.scheme) {
        case Scheme::ExactFiniteActivity:
            require(fa && model.sigma2 == 0, Errc::SchemeMismatch,
                    "exact scheme requires sigma2 = 0 and a finite-activity measure");
            effective_ = model;
            break;
        case Scheme::GridDiffusion:
            require(fa, Errc::SchemeMismatch, "grid scheme requires a finite-activity measure");
            effective_ = model;
            break;
        case Scheme::TruncatedInfiniteActivity:
            require(plan_.delta.has_value(), Errc::InvalidSpec,
                    "truncated scheme requires a truncation level");
            effective_ = substitute_model(model, *plan_.delta, plan_.gaussian_substitution);
            break;
    }

    slope_ = gamma0(effective_);
    sigma_ = std::sqrt(effective_.sigma2);
    LargeJumpLaw law = large_jump_law(effective_.measure, 0.0);
    jump_rate_ = law.rate;
    jumps_ = std::move(law.sampler);

    grid_ = plan_.scheme == Scheme::GridDiffusion ||
            (plan_.scheme == Scheme::TruncatedInfiniteActivity && sigma_ > 0);
    if (grid_)
        require(plan_.dt.has_value() && *plan_.dt > 0, Errc::InvalidSpec,
                "grid monitoring requires dt > 0");
}

ExitRecord ExitSimulator::run(RngStream stream, std::vector<TracePoint>* trace) const {
    Philox rng = stream.open();
    trace_point(trace, 0, 0, 's');
    return grid_ ? run_grid(rng, trace) : run_event_driven(rng, trace);
}

ExitRecord ExitSimulator::run_event_driven(Philox& rng, std::vector<TracePoint>* trace) const {
    const double horizon = plan_.horizon;
    double t = 0, x = 0;
    for (;;) {
        const double t_jump = jump_rate_ > 0 ? t + rng.exponential(jump_rate_) : kInf;
        if (slope_ != 0) {
            // the drift ray meets its boundary at a solvable time; crossing
            // strictly before the next jump exits at exactly the boundary
            const double t_hit =
                slope_ > 0 ? t + (a_ - x) / slope_ : t + (-b_ - x) / slope_;
            if (t_hit <= horizon && t_hit < t_jump) {
                const double level = slope_ > 0 ? a_ : -b_;
                trace_point(trace, t_hit, level, 'x');
                return {slope_ > 0 ? ExitRecord::Kind::Up : ExitRecord::Kind::Down, t_hit,
                        level, plan_.scheme};
            }
        }
        if (t_jump > horizon) {
            const double x_end = x + slope_ * (horizon - t);
            trace_point(trace, horizon, x_end, 'c');
            return {ExitRecord::Kind::Censored, horizon, x_end, plan_.scheme};
        }
        x += slope_ * (t_jump - t);
        t = t_jump;
        x += jumps_(rng);
        trace_point(trace, t, x, 'j');
        if (x >= a_) return {ExitRecord::Kind::Up, t, x, plan_.scheme};
        if (x <= -b_) return {ExitRecord::Kind::Down, t, x, plan_.scheme};
    }
}

ExitRecord ExitSimulator::run_grid(Philox& rng, std::vector<TracePoint>* trace) const {
    const double horizon = plan_.horizon;
    const double dt = *plan_.dt;
    double t = 0, x = 0;
    double t_jump = jump_rate_ > 0 ? rng.exponential(jump_rate_) : kInf;
    while (t < horizon) {
        double t_next = std::min(t + dt, horizon);
        const bool at_jump = t_jump <= t_next;
        if (at_jump) t_next = t_jump;
        const double step = t_next - t;
        x += slope_ * step + sigma_ * std::sqrt(step) * rng.normal();
        t = t_next;
        if (at_jump) {
            x += jumps_(rng);
            t_jump = t + (jump_rate_ > 0 ? rng.exponential(jump_rate_) : kInf);
            trace_point(trace, t, x, 'j');
        } else {
            trace_point(trace, t, x, 'g');
        }
        if (x >= a_) return {ExitRecord::Kind::Up, t, x, plan_.scheme};
        if (x <= -b_) return {ExitRecord::Kind::Down, t, x, plan_.scheme};
    }
    trace_point(trace, horizon, x, 'c');
    return {ExitRecord::Kind::Censored, horizon, x, plan_.scheme};
}

ExitRecord simulate_exit(const LevyModel& model, double a, double b, const SimPlan& plan,
                         RngStream stream, std::vector<TracePoint>* trace) {
    return ExitSimulator(model, a, b, plan).run(stream, trace);
}

}  // namespace levyexit
