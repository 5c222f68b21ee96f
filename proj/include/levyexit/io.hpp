#pragma once

// Versioned document schema ("levy-exit/1") for models, scenarios, and
// reports, plus the delimited-table renderers. See the README for one
// example per measure family.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "levyexit/catalog_fwd.hpp"
#include "levyexit/estimator.hpp"
#include "levyexit/model.hpp"

namespace levyexit {

inline constexpr const char* kSchemaTag = "levy-exit/1";

// Scenario: one model, several windows, shared campaign parameters.
struct Scenario {
    std::string name;
    LevyModel model;
    std::vector<ExitQuery> queries;
    std::optional<std::uint64_t> paths;
    std::optional<std::uint64_t> seed;
    std::optional<double> alpha;
    PlanHints hints;

    bool operator==(const Scenario&) const = default;
};

struct ScenarioFile {
    std::vector<Scenario> scenarios;
    bool operator==(const ScenarioFile&) const = default;
};

nlohmann::json to_json(const MeasureSpec& m);
nlohmann::json to_json(const LevyModel& model);
nlohmann::json to_json(const ExitQuery& q);
nlohmann::json to_json(const Scenario& s);

MeasureSpec measure_from_json(const nlohmann::json& j, const std::string& path);
LevyModel model_from_json(const nlohmann::json& j, const std::string& path);
ExitQuery query_from_json(const nlohmann::json& j, const std::string& path);
Scenario scenario_from_json(const nlohmann::json& j, const std::string& path);

/// Full documents carry the schema header.
std::string render_model_document(const LevyModel& model);
std::string render_scenario_document(const ScenarioFile& file);

LevyModel parse_model_document(const std::string& text);
ScenarioFile parse_scenario_document(const std::string& text);

LevyModel load_model_file(const std::string& file);
ScenarioFile load_scenario_file(const std::string& file);

/// Scenarios expand to one verification row per (model, query).
std::vector<CatalogEntry> to_entries(const ScenarioFile& file);

// Report renderers; deterministic byte-for-byte given the same inputs.
std::string to_tsv(const CrossCheckReport& report);
nlohmann::json to_json(const CrossCheckReport& report);
std::string to_tsv(const std::vector<ExitEstimate>& estimates,
                   const std::vector<std::string>& ids, const std::vector<SimPlan>& plans);
nlohmann::json to_json(const std::vector<ExitEstimate>& estimates,
                       const std::vector<std::string>& ids, const std::vector<SimPlan>& plans);

/// Shortest-round-trip numeric formatting shared by every renderer;
/// infinities render as "inf"/"-inf".
std::string format_number(double v);

void write_file(const std::string& path, const std::string& contents);
std::string read_file(const std::string& path);

}  // namespace levyexit
