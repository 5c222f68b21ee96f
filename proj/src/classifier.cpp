#include "levyexit/classifier.hpp"

#include <cmath>

namespace levyexit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Shape {
    bool fv = false;          // small-jump variation integral finite
    bool sigma = false;       // sigma2 > 0
    bool neg = false, pos = false;  // half-lines charged
    double g0 = 0;            // slope; only meaningful when fv
    bool zero_neg = false;    // 0 in supp(measure | (-inf,0])
    bool zero_pos = false;
};

Shape shape_of(const LevyModel& model) {
    Shape s;
    s.fv = small_jump_variation_finite(model.measure);
    s.sigma = model.sigma2 > 0;
    s.neg = charges(model.measure, Side::Neg);
    s.pos = charges(model.measure, Side::Pos);
    s.g0 = s.fv ? gamma0(model) : 0.0;
    s.zero_neg = zero_in_support(model.measure, Side::Neg);
    s.zero_pos = zero_in_support(model.measure, Side::Pos);
    return s;
}

// Shared "no fast escape" clause of the time-local predicates: the drift is
// either absent or compensated by arbitrarily small opposing jumps.
bool drift_balanced(const Shape& s) {
    if (s.g0 == 0) return true;
    return s.g0 > 0 ? s.zero_neg : s.zero_pos;
}

}  // namespace

const char* monotonicity_name(Monotonicity m) {
    switch (m) {
        case Monotonicity::IncreasingSubordinator: return "increasing-subordinator";
        case Monotonicity::DecreasingSubordinator: return "decreasing-subordinator";
        case Monotonicity::NotMonotone: return "not-monotone";
        case Monotonicity::ZeroProcess: return "zero-process";
    }
    return "?";
}

const char* verdict_name(VerdictValue v) {
    switch (v) {
        case VerdictValue::Positive: return "Positive";
        case VerdictValue::Zero: return "Zero";
        case VerdictValue::Unknown: return "Unknown";
    }
    return "?";
}

void validate(const ExitQuery& q) {
    require(std::isfinite(q.a) && q.a > 0, Errc::InvalidQuery, "query.a: must be > 0");
    require(std::isfinite(q.b) && q.b > 0, Errc::InvalidQuery, "query.b: must be > 0");
    require(std::isfinite(q.m) && q.m >= 0, Errc::InvalidQuery, "query.m: must be finite, >= 0");
    require(!std::isnan(q.M) && q.m < q.M, Errc::InvalidQuery, "query: need m < M");
}

Monotonicity monotonicity(const LevyModel& model) {
    const Shape s = shape_of(model);
    if (s.sigma || !s.fv || (s.neg && s.pos)) return Monotonicity::NotMonotone;
    // sigma2 = 0, finite variation, at most one side charged
    if (!s.neg && !s.pos && s.g0 == 0) return Monotonicity::ZeroProcess;
    if (!s.neg && s.g0 >= 0) return Monotonicity::IncreasingSubordinator;
    if (!s.pos && s.g0 <= 0) return Monotonicity::DecreasingSubordinator;
    return Monotonicity::NotMonotone;
}

bool exits_proper(const LevyModel& model) {
    const Shape s = shape_of(model);
    if (s.sigma || !s.fv) return true;
    if (s.neg && s.pos) return true;
    if (s.pos && !s.neg) return s.g0 < 0;
    if (s.neg && !s.pos) return s.g0 > 0;
    return false;  // pure drift or zero process
}

bool zero_in_exit_support(const LevyModel& model) {
    const Shape s = shape_of(model);
    return (s.neg && s.pos) || s.sigma || !s.fv;
}

bool confinable(const LevyModel& model) {
    const Shape s = shape_of(model);
    if (s.sigma || !s.fv) return true;
    return drift_balanced(s);
}

bool exit_support_unbounded(const LevyModel& model) {
    const Shape s = shape_of(model);
    if (s.sigma || !s.fv) return true;
    if (s.g0 == 0) return s.neg && s.pos;
    return s.g0 > 0 ? s.zero_neg : s.zero_pos;
}

bool exit_support_full(const LevyModel& model) {
    const Shape s = shape_of(model);
    if (s.sigma || !s.fv) return true;
    return s.neg && s.pos && drift_balanced(s);
}

Verdict decide(const LevyModel& model, const ExitQuery& q) {
    validate(q);
    const Monotonicity mono = monotonicity(model);
    if (mono != Monotonicity::NotMonotone) {
        switch (mono) {
            case Monotonicity::ZeroProcess: return {VerdictValue::Zero, "monotone.zero-process"};
            case Monotonicity::IncreasingSubordinator:
                return {VerdictValue::Zero, "monotone.increasing"};
            default: return {VerdictValue::Zero, "monotone.decreasing"};
        }
    }

    const bool from_zero = q.m == 0;
    const bool to_inf = std::isinf(q.M);

    if (from_zero && to_inf) return {VerdictValue::Positive, "prop1"};

    if (from_zero) {
        if (zero_in_exit_support(model)) return {VerdictValue::Positive, "prop2"};
        // Remaining class: sigma2 = 0, finite variation, one-sided jumps with
        // strictly opposing drift. The drift-side boundary is reached at
        // a'/|g0|; mass on [0,M) at both boundaries iff that beats M.
        const double g0v = gamma0(model);
        const double drift_side_boundary = g0v > 0 ? q.a : q.b;
        const bool positive = drift_side_boundary / std::abs(g0v) < q.M;
        return {positive ? VerdictValue::Positive : VerdictValue::Zero, "prop3.threshold"};
    }

    if (to_inf) {
        if (exit_support_unbounded(model)) return {VerdictValue::Positive, "prop5"};
        // Remaining class: sigma2 = 0, finite variation, drift g0 != 0, and
        // the opposing jump support starts a gap W away from 0. Late exits
        // at both boundaries exist iff m|g0| undershoots the drift-side
        // boundary or the annulus is wider than W.
        const double g0v = gamma0(model);
        const Side opposing = g0v > 0 ? Side::Neg : Side::Pos;
        const double w = *support_gap(model.measure, opposing);
        const double drift_side_boundary = g0v > 0 ? q.a : q.b;
        const bool positive = q.m * std::abs(g0v) < drift_side_boundary || q.a + q.b > w;
        // Jumps along the drift direction are allowed here; flag them so the
        // report stays auditable.
        const bool two_sided = charges(model.measure, opposite(opposing));
        const char* tag = two_sided ? "prop6.threshold.two-sided" : "prop6.threshold";
        return {positive ? VerdictValue::Positive : VerdictValue::Zero, tag};
    }

    // m > 0 and M < inf
    if (exit_support_full(model)) return {VerdictValue::Positive, "corollary"};
    const Verdict head = decide(model, {q.a, q.b, 0, q.M});
    const Verdict tail = decide(model, {q.a, q.b, q.m, kInf});
    if (head.value == VerdictValue::Zero || tail.value == VerdictValue::Zero)
        return {VerdictValue::Zero, "window.monotone"};
    return {VerdictValue::Unknown, "unknown.gap"};
}

Classification classify(const LevyModel& model) {
    const Shape s = shape_of(model);
    Classification c;
    c.mono = monotonicity(model);

    const char* bulk = s.sigma ? "diffusive" : (!s.fv ? "infinite-variation" : nullptr);

    c.proper.value = exits_proper(model);
    if (bulk) c.proper.why = bulk;
    else if (s.neg && s.pos) c.proper.why = "charges-both";
    else if (c.proper.value) c.proper.why = "one-sided-jumps-opposing-drift";
    else c.proper.why = monotonicity_name(c.mono);

    c.before.value = zero_in_exit_support(model);
    if (bulk) c.before.why = bulk;
    else if (s.neg && s.pos) c.before.why = "charges-both";
    else c.before.why = "one-sided-finite-variation";

    c.confinable.value = confinable(model);
    if (bulk) c.confinable.why = bulk;
    else if (s.g0 == 0) c.confinable.why = "drift-zero";
    else if (c.confinable.value) c.confinable.why = "drift-balanced-by-small-jumps";
    else c.confinable.why = "drift-outruns-jump-support";

    c.after.value = exit_support_unbounded(model);
    if (bulk) c.after.why = bulk;
    else if (s.g0 == 0) c.after.why = c.after.value ? "drift-zero-charges-both" : "one-sided";
    else c.after.why = c.after.value ? "drift-balanced-by-small-jumps"
                                     : "drift-outruns-jump-support";

    c.full.value = exit_support_full(model);
    if (bulk) c.full.why = bulk;
    else if (!(s.neg && s.pos)) c.full.why = "one-sided";
    else c.full.why = c.full.value ? "charges-both-drift-balanced"
                                   : "drift-outruns-jump-support";

    return c;
}

}  // namespace levyexit
