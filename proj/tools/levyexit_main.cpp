// Batch front door: classify models, decide windows, run estimates, and
// cross-check the classifier against Monte Carlo.
//
// Exit codes: 0 success, 1 scientific contradiction (simulation refutes a
// Zero verdict), 2 usage/config/parse error. Defaults: paths=100000,
// alpha=0.05, seed=42, horizon=16*max(m,1) (raised to a finite M), dt=1e-4.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "levyexit/catalog.hpp"
#include "levyexit/estimator.hpp"
#include "levyexit/io.hpp"

namespace lx = levyexit;

namespace {

struct CampaignFlags {
    std::uint64_t paths = 100000;
    std::uint64_t seed = 42;
    double alpha = 0.05;
    int workers = 0;
    std::string scheme = "auto";
    double horizon = 0;  // 0: per-query default
    std::string out = ".";
    std::string format = "table";
};

void add_campaign_flags(CLI::App* cmd, CampaignFlags& f) {
    cmd->add_option("--paths", f.paths, "paths per row (default 100000)");
    cmd->add_option("--seed", f.seed, "base RNG seed (default 42)");
    cmd->add_option("--alpha", f.alpha, "CI tail mass (default 0.05)");
    cmd->add_option("--workers", f.workers, "worker threads (default: hardware)");
    cmd->add_option("--horizon", f.horizon, "censoring horizon override");
    cmd->add_option("--scheme", f.scheme, "auto|exact|grid|truncated")
        ->check(CLI::IsMember({"auto", "exact", "grid", "truncated"}));
    cmd->add_option("--out", f.out, "report directory (default .)");
    cmd->add_option("--format", f.format, "stdout format: table|structured")
        ->check(CLI::IsMember({"table", "structured"}));
}

std::optional<lx::Scheme> scheme_from_flag(const std::string& s) {
    if (s == "exact") return lx::Scheme::ExactFiniteActivity;
    if (s == "grid") return lx::Scheme::GridDiffusion;
    if (s == "truncated") return lx::Scheme::TruncatedInfiniteActivity;
    return std::nullopt;  // auto
}

// CLI-level flags override per-scenario hints.
void fold_flags(const CampaignFlags& f, lx::CatalogEntry& entry) {
    if (f.horizon > 0) entry.hints.horizon = f.horizon;
    if (auto s = scheme_from_flag(f.scheme)) entry.hints.scheme = s;
}

double parse_window_end(const std::string& text) {
    std::string s = text;
    for (char& c : s) c = static_cast<char>(std::tolower(c));
    if (s == "inf" || s == "+inf" || s == "infinity")
        return std::numeric_limits<double>::infinity();
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used == s.size()) return v;
    } catch (...) {
    }
    lx::fail(lx::Errc::ParseError, "--M: expected a number or 'inf'");
}

void print_classification(const lx::LevyModel& model, const std::string& format) {
    const lx::Classification c = lx::classify(model);
    if (format == "structured") {
        nlohmann::json out = {
            {"monotonicity", lx::monotonicity_name(c.mono)},
            {"proper", {{"value", c.proper.value}, {"why", c.proper.why}}},
            {"before", {{"value", c.before.value}, {"why", c.before.why}}},
            {"after", {{"value", c.after.value}, {"why", c.after.why}}},
            {"full", {{"value", c.full.value}, {"why", c.full.why}}},
            {"confinable", {{"value", c.confinable.value}, {"why", c.confinable.why}}},
        };
        std::cout << out.dump(2) << "\n";
        return;
    }
    const auto b = [](bool v) { return v ? "true" : "false"; };
    std::printf("proper=%s before=%s after=%s full=%s confinable=%s\n", b(c.proper.value),
                b(c.before.value), b(c.after.value), b(c.full.value), b(c.confinable.value));
    std::printf("monotonicity=%s\n", lx::monotonicity_name(c.mono));
    std::printf("proper: %s [%s]\n", b(c.proper.value), c.proper.why);
    std::printf("before: %s [%s]\n", b(c.before.value), c.before.why);
    std::printf("after: %s [%s]\n", b(c.after.value), c.after.why);
    std::printf("full: %s [%s]\n", b(c.full.value), c.full.why);
    std::printf("confinable: %s [%s]\n", b(c.confinable.value), c.confinable.why);
}

void write_reports(const std::string& dir, const std::string& base, const std::string& tsv,
                   const nlohmann::json& doc) {
    std::filesystem::create_directories(dir);
    lx::write_file(dir + "/" + base + ".tsv", tsv);
    lx::write_file(dir + "/" + base + ".json", doc.dump(2) + "\n");
}

void print_row_summary(const lx::CrossCheckRow& r) {
    std::printf("[%-13s] %-22s verdict=%s (%s) hits=%llu/%llu censored=%llu\n",
                lx::status_name(r.status), r.id.c_str(), lx::verdict_name(r.verdict.value),
                r.verdict.reason.c_str(),
                static_cast<unsigned long long>(r.estimate.hits_up),
                static_cast<unsigned long long>(r.estimate.hits_down),
                static_cast<unsigned long long>(r.estimate.n_censored));
}

int cmd_classify(const std::string& file, const std::string& format) {
    print_classification(lx::load_model_file(file), format);
    return 0;
}

int cmd_decide(const std::string& file, double a, double b, double m, const std::string& M,
               const std::string& format) {
    const lx::LevyModel model = lx::load_model_file(file);
    const lx::ExitQuery query{a, b, m, parse_window_end(M)};
    const lx::Verdict v = lx::decide(model, query);
    if (format == "structured") {
        nlohmann::json out = {{"verdict", lx::verdict_name(v.value)},
                              {"reason", v.reason},
                              {"query", lx::to_json(query)}};
        std::cout << out.dump(2) << "\n";
    } else {
        std::printf("verdict=%s reason=%s\n", lx::verdict_name(v.value), v.reason.c_str());
    }
    return 0;
}

int cmd_estimate(const std::string& file, const CampaignFlags& flags,
                 const std::string& trace_file) {
    const lx::ScenarioFile scenarios = lx::load_scenario_file(file);
    std::vector<lx::ExitEstimate> estimates;
    std::vector<std::string> ids;
    std::vector<lx::SimPlan> plans;

    for (const lx::Scenario& sc : scenarios.scenarios) {
        std::vector<lx::CatalogEntry> entries = lx::to_entries({{sc}});
        const std::uint64_t base_seed = sc.seed.value_or(flags.seed);
        for (std::size_t i = 0; i < entries.size(); ++i) {
            lx::CatalogEntry& e = entries[i];
            fold_flags(flags, e);
            lx::PlanRequest req{e.query.a, e.query.b,
                                e.hints.horizon.value_or(lx::default_horizon(e.query)), e.hints};
            const lx::SimPlan p = lx::plan(e.model, req);
            lx::EstimateOptions opts;
            opts.paths = sc.paths.value_or(flags.paths);
            opts.alpha = sc.alpha.value_or(flags.alpha);
            opts.seed = base_seed + i;
            opts.workers = flags.workers;
            estimates.push_back(lx::estimate(e.model, e.query, p, opts));
            ids.push_back(e.id);
            plans.push_back(p);
            const lx::ExitEstimate& est = estimates.back();
            std::printf("%-22s p_up=%s p_down=%s censored=%llu\n", e.id.c_str(),
                        lx::format_number(est.p_up_hat).c_str(),
                        lx::format_number(est.p_down_hat).c_str(),
                        static_cast<unsigned long long>(est.n_censored));
            if (!trace_file.empty() && estimates.size() == 1) {
                std::vector<lx::TracePoint> trace;
                lx::simulate_exit(e.model, e.query.a, e.query.b, p, {opts.seed, 0}, &trace);
                std::string out;
                for (const lx::TracePoint& tp : trace)
                    out += lx::format_number(tp.t) + "\t" + lx::format_number(tp.x) + "\t" +
                           tp.tag + std::string("\n");
                lx::write_file(trace_file, out);
            }
        }
    }
    write_reports(flags.out, "estimates", lx::to_tsv(estimates, ids, plans),
                  lx::to_json(estimates, ids, plans));
    if (flags.format == "structured")
        std::cout << lx::to_json(estimates, ids, plans).dump(2) << "\n";
    return 0;
}

int cmd_verify(const std::string& file, bool builtin, const CampaignFlags& flags) {
    lx::CrossCheckReport report;
    report.meta = {flags.paths, flags.alpha, flags.seed};

    if (builtin) {
        std::vector<lx::CatalogEntry> entries = lx::builtin_verification();
        for (lx::CatalogEntry& e : entries) fold_flags(flags, e);
        lx::EstimateOptions opts{flags.paths, flags.alpha, flags.seed, flags.workers};
        report = lx::cross_check(entries, opts);
    } else {
        const lx::ScenarioFile scenarios = lx::load_scenario_file(file);
        for (const lx::Scenario& sc : scenarios.scenarios) {
            std::vector<lx::CatalogEntry> entries = lx::to_entries({{sc}});
            for (lx::CatalogEntry& e : entries) fold_flags(flags, e);
            lx::EstimateOptions opts;
            opts.paths = sc.paths.value_or(flags.paths);
            opts.alpha = sc.alpha.value_or(flags.alpha);
            opts.seed = sc.seed.value_or(flags.seed);
            opts.workers = flags.workers;
            lx::CrossCheckReport part = lx::cross_check(entries, opts);
            for (lx::CrossCheckRow& r : part.rows) report.rows.push_back(std::move(r));
        }
    }

    for (const lx::CrossCheckRow& r : report.rows) print_row_summary(r);
    write_reports(flags.out, "crosscheck", lx::to_tsv(report), lx::to_json(report));
    if (flags.format == "structured") std::cout << lx::to_json(report).dump(2) << "\n";

    if (report.any_contradiction()) {
        std::fprintf(stderr, "verification FAILED: contradiction row(s) present\n");
        return 1;
    }
    std::printf("verification ok: %zu rows, no contradictions\n", report.rows.size());
    return 0;
}

int cmd_catalog(const std::string& format) {
    const auto& witnesses = lx::witness_catalog();
    if (format == "structured") {
        nlohmann::json arr = nlohmann::json::array();
        for (const lx::Witness& w : witnesses) {
            const lx::Classification c = lx::classify(w.model);
            arr.push_back({{"name", w.name},
                           {"note", w.note},
                           {"model", lx::to_json(w.model)},
                           {"proper", c.proper.value},
                           {"before", c.before.value},
                           {"after", c.after.value},
                           {"full", c.full.value},
                           {"confinable", c.confinable.value},
                           {"monotonicity", lx::monotonicity_name(c.mono)}});
        }
        std::cout << nlohmann::json{{"schema", lx::kSchemaTag}, {"witnesses", arr}}.dump(2)
                  << "\n";
        return 0;
    }
    const auto mark = [](bool v) { return v ? "yes" : "no "; };
    std::printf("%-18s %-7s %-7s %-7s %-7s  %s\n", "name", "proper", "before", "after", "full",
                "note");
    for (const lx::Witness& w : witnesses) {
        const lx::Classification c = lx::classify(w.model);
        std::printf("%-18s %-7s %-7s %-7s %-7s  %s\n", w.name.c_str(), mark(c.proper.value),
                    mark(c.before.value), mark(c.after.value), mark(c.full.value),
                    w.note.c_str());
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Two-sided exit classification and Monte Carlo verification for Lévy models"};
    app.require_subcommand(1);

    std::string model_file, scenario_file, format = "table", window_end = "inf";
    std::string trace_file;
    double qa = 1, qb = 1, qm = 0;
    bool builtin = false;
    CampaignFlags est_flags, ver_flags;

    CLI::App* classify = app.add_subcommand("classify", "print the predicate vector of a model");
    classify->add_option("model-file", model_file, "model document")->required();
    classify->add_option("--format", format, "table|structured")
        ->check(CLI::IsMember({"table", "structured"}));

    CLI::App* decide = app.add_subcommand("decide", "decide one window for a model");
    decide->add_option("model-file", model_file, "model document")->required();
    decide->add_option("--a", qa, "upper boundary (> 0)")->required();
    decide->add_option("--b", qb, "lower boundary (> 0)")->required();
    decide->add_option("--m", qm, "window start (>= 0)");
    decide->add_option("--M", window_end, "window end (number or 'inf')");
    decide->add_option("--format", format, "table|structured")
        ->check(CLI::IsMember({"table", "structured"}));

    CLI::App* estimate = app.add_subcommand("estimate", "run the estimates of a scenario file");
    estimate->add_option("scenario-file", scenario_file, "scenario document")->required();
    estimate->add_option("--trace", trace_file, "dump the first path of the first row");
    add_campaign_flags(estimate, est_flags);

    CLI::App* verify =
        app.add_subcommand("verify", "cross-check classifier verdicts against Monte Carlo");
    verify->add_option("scenario-file", scenario_file, "scenario document");
    verify->add_flag("--builtin", builtin, "run the built-in verification catalog");
    add_campaign_flags(verify, ver_flags);

    CLI::App* catalog = app.add_subcommand("catalog", "print the built-in witness models");
    catalog->add_option("--format", format, "table|structured")
        ->check(CLI::IsMember({"table", "structured"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (classify->parsed()) return cmd_classify(model_file, format);
        if (decide->parsed()) return cmd_decide(model_file, qa, qb, qm, window_end, format);
        if (estimate->parsed()) return cmd_estimate(scenario_file, est_flags, trace_file);
        if (verify->parsed()) {
            if (!builtin && scenario_file.empty()) {
                std::fprintf(stderr, "verify: need a scenario file or --builtin\n");
                return 2;
            }
            return cmd_verify(scenario_file, builtin, ver_flags);
        }
        if (catalog->parsed()) return cmd_catalog(format);
    } catch (const lx::Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "unexpected error: %s\n", e.what());
        return 2;
    }
    return 2;
}
