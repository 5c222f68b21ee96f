#pragma once

// Exact predicates on Lévy triplets deciding where the two-sided exit-time
// law puts mass on both boundaries at once, plus the master interval
// decision. Answers are structural (family metadata only), so a Positive or
// Zero verdict is a theorem about the model, not an approximation.

#include <string>

#include "levyexit/model.hpp"

namespace levyexit {

enum class Monotonicity { IncreasingSubordinator, DecreasingSubordinator, NotMonotone, ZeroProcess };
const char* monotonicity_name(Monotonicity m);

// Annulus (-b, a) and time window [m, M). M may be +inf.
struct ExitQuery {
    double a = 1;
    double b = 1;
    double m = 0;
    double M = std::numeric_limits<double>::infinity();

    bool operator==(const ExitQuery&) const = default;
};

/// Throws Error{InvalidQuery} unless a > 0, b > 0 and 0 <= m < M.
void validate(const ExitQuery& q);

enum class VerdictValue { Positive, Zero, Unknown };
const char* verdict_name(VerdictValue v);

// Tri-state decision about "both boundaries are hit within the window with
// positive probability". `reason` is a stable rule tag naming the branch
// that fired; see the README for the full tag table.
struct Verdict {
    VerdictValue value = VerdictValue::Unknown;
    std::string reason;

    bool operator==(const Verdict&) const = default;
};

Monotonicity monotonicity(const LevyModel& model);

/// Both boundaries reachable at all: the exit is not a.s. one-sided.
bool exits_proper(const LevyModel& model);

/// Both boundaries reachable arbitrarily early (mass on [0,M) for every M).
bool zero_in_exit_support(const LevyModel& model);

/// The path stays in every epsilon-ball up to every finite time with
/// positive probability.
bool confinable(const LevyModel& model);

/// Both boundaries reachable arbitrarily late (mass on [m,inf) for every m).
bool exit_support_unbounded(const LevyModel& model);

/// Both boundaries reachable within every window [m,M).
bool exit_support_full(const LevyModel& model);

/// Master decision for one window; never refuses a valid model/query.
Verdict decide(const LevyModel& model, const ExitQuery& query);

// One predicate with the tag of its decisive branch (classify output).
struct PredicateReport {
    bool value = false;
    const char* why = "";
};

struct Classification {
    Monotonicity mono = Monotonicity::ZeroProcess;
    PredicateReport proper;
    PredicateReport before;      // zero_in_exit_support
    PredicateReport after;       // exit_support_unbounded
    PredicateReport full;        // exit_support_full
    PredicateReport confinable;
};

Classification classify(const LevyModel& model);

}  // namespace levyexit
