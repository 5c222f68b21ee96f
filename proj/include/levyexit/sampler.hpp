#pragma once

// First-exit simulation from the annulus (-b, a).
//
// Finite-activity models with sigma2 = 0 are simulated exactly: exponential
// inter-jump clocks, linear drift between jumps, boundary crossings solved in
// closed form. Diffusive models run on a uniform grid with jumps superposed
// (discrete monitoring; the known crossing bias is bounded empirically by the
// refinement-stability test). Infinite-activity models are reduced to a
// finite-activity surrogate by cutting jumps below delta, optionally folding
// their variance into the Gaussian part.

#include <optional>
#include <vector>

#include "levyexit/classifier.hpp"
#include "levyexit/model.hpp"
#include "levyexit/rng.hpp"

namespace levyexit {

enum class Scheme { ExactFiniteActivity, GridDiffusion, TruncatedInfiniteActivity };
const char* scheme_name(Scheme s);

struct SimPlan {
    Scheme scheme = Scheme::ExactFiniteActivity;
    double horizon = 16;                 // censoring time, > 0
    std::optional<double> dt;            // grid step; present iff a Gaussian part is simulated
    std::optional<double> delta;         // truncation level (truncated scheme only)
    bool gaussian_substitution = false;  // replace cut jumps by matching Gaussian variance

    bool operator==(const SimPlan&) const = default;
};

struct PlanHints {
    std::optional<double> horizon;
    std::optional<Scheme> scheme;
    std::optional<double> dt;
    std::optional<double> delta;
    std::optional<bool> gaussian_substitution;

    bool operator==(const PlanHints&) const = default;
};

struct PlanRequest {
    double a = 1;
    double b = 1;
    double horizon = 16;
    PlanHints hints;
};

/// Picks a scheme and its parameters for the model; refuses no valid model.
/// Defaults: dt = 1e-4; delta chosen so that the cut small-jump mass is
/// statistically invisible over the horizon (std dev < 1e-3 * min(a,b)), or,
/// under Gaussian substitution, so that sigma(delta) >= 10 * delta.
SimPlan plan(const LevyModel& model, const PlanRequest& req);

/// Finite-activity surrogate of an infinite-activity model: keeps jumps with
/// |x| >= delta, optionally adds their small-jump variance to sigma2, and
/// re-centers infinite-variation drift. Throws Error{NotInfiniteActivity}
/// when the model is already finite-activity.
LevyModel substitute_model(const LevyModel& model, double delta,
                           bool gaussian_substitution = true);

struct ExitRecord {
    enum class Kind { Up, Down, Censored };
    Kind kind = Kind::Censored;
    double time = 0;   // exit time, or the horizon when censored
    double value = 0;  // position at that time (Up => value >= a, Down => value <= -b)
    Scheme scheme = Scheme::ExactFiniteActivity;

    bool operator==(const ExitRecord&) const = default;
};

// One monitored path point; tag: 's' start, 'j' jump, 'g' grid, 'x' exit,
// 'c' censored.
struct TracePoint {
    double t = 0;
    double x = 0;
    char tag = 's';
};

// Immutable per-campaign engine: resolves the surrogate and the jump law
// once, then runs any number of paths. Thread-safe; each path owns its RNG
// stream, so results do not depend on scheduling.
class ExitSimulator {
public:
    ExitSimulator(const LevyModel& model, double a, double b, SimPlan plan);

    ExitRecord run(RngStream stream, std::vector<TracePoint>* trace = nullptr) const;

    const LevyModel& effective_model() const { return effective_; }
    const SimPlan& plan() const { return plan_; }

private:
    ExitRecord run_event_driven(Philox& rng, std::vector<TracePoint>* trace) const;
    ExitRecord run_grid(Philox& rng, std::vector<TracePoint>* trace) const;

    SimPlan plan_;
    double a_ = 1, b_ = 1;
    LevyModel effective_;
    double slope_ = 0;
    double sigma_ = 0;
    double jump_rate_ = 0;
    JumpSampler jumps_;
    bool grid_ = false;
};

/// One path. Deterministic in (model, a, b, plan, stream).
ExitRecord simulate_exit(const LevyModel& model, double a, double b, const SimPlan& plan,
                         RngStream stream, std::vector<TracePoint>* trace = nullptr);

}  // namespace levyexit
