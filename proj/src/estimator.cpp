#include "levyexit/estimator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

#include <boost/math/distributions/normal.hpp>

namespace levyexit {

namespace {

unsigned resolve_workers(int requested) {
    if (requested > 0) return static_cast<unsigned>(requested);
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

// Fixed-size jobs pulled from a shared counter; a failure in any worker is
// rethrown on the caller thread after join.
template <class Fn>
void run_jobs(std::size_t jobs, unsigned workers, const Fn& fn) {
    workers = std::max<unsigned>(1, std::min<std::size_t>(workers, jobs));
    if (workers == 1) {
        for (std::size_t j = 0; j < jobs; ++j) fn(j);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t j = next.fetch_add(1);
                if (j >= jobs) return;
                try {
                    fn(j);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!first_error) first_error = std::current_exception();
                    return;
                }
            }
        });
    }
    for (std::thread& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

constexpr std::uint64_t kShardSize = 4096;

struct ShardTotals {
    std::uint64_t up = 0, down = 0, out = 0, censored = 0, exits = 0;
    double sum_exit_time = 0;
};

}  // namespace

Interval wilson_interval(std::uint64_t hits, std::uint64_t n, double alpha) {
    require(n > 0, Errc::InvalidSpec, "wilson_interval: n must be > 0");
    require(hits <= n, Errc::InvalidSpec, "wilson_interval: hits must be <= n");
    require(alpha > 0 && alpha < 1, Errc::InvalidSpec, "wilson_interval: alpha in (0,1)");
    const double z = boost::math::quantile(boost::math::normal_distribution<>(), 1 - alpha / 2);
    const double nn = static_cast<double>(n);
    const double p = static_cast<double>(hits) / nn;
    const double z2 = z * z;
    const double denom = 1 + z2 / nn;
    const double centre = (p + z2 / (2 * nn)) / denom;
    const double half = (z / denom) * std::sqrt(p * (1 - p) / nn + z2 / (4 * nn * nn));
    return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

double default_horizon(const ExitQuery& query) {
    double h = 16.0 * std::max(query.m, 1.0);
    if (std::isfinite(query.M)) h = std::max(h, query.M);
    return h;
}

ExitEstimate estimate(const LevyModel& model, const ExitQuery& query, const SimPlan& plan,
                      const EstimateOptions& opts) {
    validate(query);
    require(opts.paths > 0, Errc::InvalidSpec, "estimate: need at least one path");
    require(plan.horizon > query.m, Errc::HorizonBelowWindow,
            "estimate: horizon does not reach the window start");
    if (std::isfinite(query.M))
        require(plan.horizon >= query.M, Errc::HorizonBelowWindow,
                "estimate: horizon does not cover the finite window end");

    const ExitSimulator sim(model, query.a, query.b, plan);
    const double window_lo = query.m;
    const double window_hi = std::min(query.M, plan.horizon);

    const std::uint64_t n = opts.paths;
    const std::size_t shards = static_cast<std::size_t>((n + kShardSize - 1) / kShardSize);
    std::vector<ShardTotals> parts(shards);

    run_jobs(shards, resolve_workers(opts.workers), [&](std::size_t s) {
        ShardTotals acc;
        const std::uint64_t lo = s * kShardSize;
        const std::uint64_t hi = std::min<std::uint64_t>(n, lo + kShardSize);
        for (std::uint64_t path = lo; path < hi; ++path) {
            const ExitRecord rec = sim.run({opts.seed, path});
            if (rec.kind == ExitRecord::Kind::Censored) {
                ++acc.censored;
                continue;
            }
            ++acc.exits;
            acc.sum_exit_time += rec.time;
            if (rec.time >= window_lo && rec.time < window_hi)
                ++(rec.kind == ExitRecord::Kind::Up ? acc.up : acc.down);
            else
                ++acc.out;
        }
        parts[s] = acc;
    });

    ShardTotals total;
    for (const ShardTotals& p : parts) {  // fixed order: worker count cannot matter
        total.up += p.up;
        total.down += p.down;
        total.out += p.out;
        total.censored += p.censored;
        total.exits += p.exits;
        total.sum_exit_time += p.sum_exit_time;
    }

    ExitEstimate est;
    est.query = query;
    est.n_paths = n;
    est.hits_up = total.up;
    est.hits_down = total.down;
    est.n_out_of_window = total.out;
    est.n_censored = total.censored;
    est.p_up_hat = static_cast<double>(total.up) / static_cast<double>(n);
    est.p_down_hat = static_cast<double>(total.down) / static_cast<double>(n);
    est.ci_up = wilson_interval(total.up, n, opts.alpha);
    est.ci_down = wilson_interval(total.down, n, opts.alpha);
    est.alpha = opts.alpha;
    est.horizon = plan.horizon;
    est.n_exits = total.exits;
    est.mean_exit_time = total.exits > 0
                             ? total.sum_exit_time / static_cast<double>(total.exits)
                             : std::numeric_limits<double>::quiet_NaN();
    est.scheme = plan.scheme;
    est.seed = opts.seed;
    return est;
}

const char* outcome_name(MCOutcome o) {
    return o == MCOutcome::HitObserved ? "hit-observed" : "no-hit";
}

const char* status_name(CheckStatus s) {
    switch (s) {
        case CheckStatus::Consistent: return "consistent";
        case CheckStatus::Contradiction: return "contradiction";
        case CheckStatus::Inconclusive: return "inconclusive";
    }
    return "?";
}

MCOutcome positivity(const ExitEstimate& est) {
    return est.hits_up >= 1 && est.hits_down >= 1 ? MCOutcome::HitObserved : MCOutcome::NoHit;
}

bool CrossCheckReport::any_contradiction() const {
    return std::any_of(rows.begin(), rows.end(), [](const CrossCheckRow& r) {
        return r.status == CheckStatus::Contradiction;
    });
}

CrossCheckReport cross_check(const std::vector<CatalogEntry>& entries,
                             const EstimateOptions& opts) {
    CrossCheckReport report;
    report.meta = {opts.paths, opts.alpha, opts.seed};
    report.rows.reserve(entries.size());

    for (std::size_t i = 0; i < entries.size(); ++i) {
        const CatalogEntry& entry = entries[i];
        validate(entry.model, "entry '" + entry.id + "' model");
        validate(entry.query);

        const Verdict verdict = decide(entry.model, entry.query);

        PlanRequest req;
        req.a = entry.query.a;
        req.b = entry.query.b;
        req.horizon = entry.hints.horizon.value_or(default_horizon(entry.query));
        req.hints = entry.hints;
        const SimPlan p = plan(entry.model, req);

        // an approximate scheme cannot certify an a.s.-zero event
        if (verdict.value == VerdictValue::Zero && p.scheme != Scheme::ExactFiniteActivity)
            fail(Errc::SchemeMismatch,
                 "entry '" + entry.id + "': Zero verdict paired with the " +
                     scheme_name(p.scheme) + " scheme");

        EstimateOptions row_opts = opts;
        row_opts.seed = opts.seed + i;
        const ExitEstimate est = estimate(entry.model, entry.query, p, row_opts);
        const MCOutcome outcome = positivity(est);

        CheckStatus status;
        if (verdict.value == VerdictValue::Zero)
            status = outcome == MCOutcome::HitObserved ? CheckStatus::Contradiction
                                                       : CheckStatus::Consistent;
        else if (verdict.value == VerdictValue::Positive)
            status = outcome == MCOutcome::HitObserved ? CheckStatus::Consistent
                                                       : CheckStatus::Inconclusive;
        else
            status = CheckStatus::Inconclusive;

        report.rows.push_back(
            {entry.id, entry.query, verdict, p, est, outcome, status, row_opts.seed});
    }
    return report;
}

}  // namespace levyexit
