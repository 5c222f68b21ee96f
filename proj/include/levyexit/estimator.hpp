#pragma once

// Monte Carlo aggregation of exit records into window-restricted boundary
// probabilities, and the classifier/simulation cross-check. Counters are
// integers merged in fixed shard order, so campaigns are bit-reproducible
// for any worker count.

#include <cstdint>
#include <string>
#include <vector>

#include "levyexit/catalog_fwd.hpp"
#include "levyexit/sampler.hpp"

namespace levyexit {

struct Interval {
    double lo = 0;
    double hi = 1;
    bool operator==(const Interval&) const = default;

    bool contains(double p) const { return lo <= p && p <= hi; }
    double half_width() const { return (hi - lo) / 2; }
};

/// Wilson score interval for a Bernoulli proportion at confidence 1 - alpha.
Interval wilson_interval(std::uint64_t hits, std::uint64_t n, double alpha);

struct ExitEstimate {
    ExitQuery query;
    std::uint64_t n_paths = 0;
    std::uint64_t hits_up = 0;     // up exits with time in [m, min(M, horizon))
    std::uint64_t hits_down = 0;   // down exits in the window
    std::uint64_t n_out_of_window = 0;  // exits outside the window
    std::uint64_t n_censored = 0;  // no exit by the horizon
    double p_up_hat = 0;
    double p_down_hat = 0;
    Interval ci_up;
    Interval ci_down;
    double alpha = 0.05;
    double horizon = 0;
    std::uint64_t n_exits = 0;     // uncensored paths
    double mean_exit_time = 0;     // over uncensored exits (any time)
    Scheme scheme = Scheme::ExactFiniteActivity;
    std::uint64_t seed = 0;

    bool operator==(const ExitEstimate&) const = default;
};

struct EstimateOptions {
    std::uint64_t paths = 100000;
    double alpha = 0.05;
    std::uint64_t seed = 42;
    int workers = 0;  // <= 0: hardware concurrency
};

/// Runs `paths` independent paths (stream = path index) and counts window
/// hits per boundary. Throws Error{HorizonBelowWindow} when the plan horizon
/// does not cover the window start (or a finite window end).
ExitEstimate estimate(const LevyModel& model, const ExitQuery& query, const SimPlan& plan,
                      const EstimateOptions& opts);

enum class MCOutcome { HitObserved, NoHit };
const char* outcome_name(MCOutcome o);

/// Conjunction semantics: observed iff both boundaries were hit in-window.
MCOutcome positivity(const ExitEstimate& est);

enum class CheckStatus { Consistent, Contradiction, Inconclusive };
const char* status_name(CheckStatus s);

struct CrossCheckRow {
    std::string id;
    ExitQuery query;
    Verdict verdict;
    SimPlan plan;
    ExitEstimate estimate;
    MCOutcome outcome = MCOutcome::NoHit;
    CheckStatus status = CheckStatus::Inconclusive;
    std::uint64_t seed = 0;
};

struct CampaignMeta {
    std::uint64_t paths = 0;
    double alpha = 0.05;
    std::uint64_t seed = 0;
};

struct CrossCheckReport {
    CampaignMeta meta;
    std::vector<CrossCheckRow> rows;

    bool any_contradiction() const;
};

/// Default censoring horizon for a window: 16 * max(m, 1), raised to cover a
/// finite window end.
double default_horizon(const ExitQuery& query);

/// Verdict vs Monte Carlo for each (model, query) entry. A Zero verdict is
/// a statement about an a.s. event, so it may only be paired with the exact
/// scheme; otherwise Error{SchemeMismatch}. One in-window hit on each
/// boundary under a Zero verdict is a Contradiction; a Positive verdict with
/// missing hits is Inconclusive (never a Contradiction), as is every Unknown
/// verdict.
CrossCheckReport cross_check(const std::vector<CatalogEntry>& entries,
                             const EstimateOptions& opts);

}  // namespace levyexit
