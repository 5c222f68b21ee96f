#include "levyexit/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

namespace levyexit {

using nlohmann::json;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

[[noreturn]] void parse_fail(const std::string& path, const std::string& what) {
    fail(Errc::ParseError, path + ": " + what);
}

const json& member(const json& j, const std::string& path, const char* key) {
    if (!j.is_object()) parse_fail(path, "expected an object");
    const auto it = j.find(key);
    if (it == j.end()) parse_fail(path, std::string("missing field '") + key + "'");
    return *it;
}

double number_from(const json& j, const std::string& path, bool allow_inf = false) {
    if (j.is_number()) return j.get<double>();
    if (allow_inf && j.is_string()) {
        std::string s = j.get<std::string>();
        for (char& c : s) c = static_cast<char>(std::tolower(c));
        if (s == "inf" || s == "+inf" || s == "infinity") return kInf;
    }
    parse_fail(path, allow_inf ? "expected a number or \"inf\"" : "expected a number");
}

double number_field(const json& j, const std::string& path, const char* key,
                     bool allow_inf = false) {
    return number_from(member(j, path, key), path + "." + key, allow_inf);
}

std::string string_field(const json& j, const std::string& path, const char* key) {
    const json& v = member(j, path, key);
    if (!v.is_string()) parse_fail(path + "." + key, "expected a string");
    return v.get<std::string>();
}

json number_to_json(double v) {
    if (std::isinf(v)) return v > 0 ? json("inf") : json("-inf");
    return json(v);
}

Side side_from(const json& j, const std::string& path) {
    if (j.is_string()) {
        const std::string s = j.get<std::string>();
        if (s == "neg") return Side::Neg;
        if (s == "pos") return Side::Pos;
    }
    parse_fail(path, "expected \"neg\" or \"pos\"");
}

json to_json(const SimpleJump& jump) {
    return std::visit(
        [](const auto& d) -> json {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, UniformJump>) {
                return {{"kind", "uniform"}, {"lo", d.lo}, {"hi", d.hi}};
            } else {
                return {{"kind", "exponential"}, {"scale", d.scale}, {"side", side_name(d.side)}};
            }
        },
        jump);
}

SimpleJump simple_from_json(const json& j, const std::string& path) {
    const std::string kind = string_field(j, path, "kind");
    if (kind == "uniform")
        return UniformJump{number_field(j, path, "lo"), number_field(j, path, "hi")};
    if (kind == "exponential")
        return ExponentialJump{number_field(j, path, "scale"),
                               side_from(member(j, path, "side"), path + ".side")};
    parse_fail(path + ".kind", "unknown simple jump kind '" + kind + "'");
}

json to_json(const PowerLawSide& s) {
    return {{"c", s.c}, {"alpha", s.alpha}, {"theta", s.theta}};
}

PowerLawSide power_side_from_json(const json& j, const std::string& path) {
    PowerLawSide s;
    s.c = number_field(j, path, "c");
    if (j.contains("alpha")) s.alpha = number_field(j, path, "alpha");
    if (j.contains("theta")) s.theta = number_field(j, path, "theta");
    return s;
}

}  // namespace

json to_json(const MeasureSpec& m) {
    return std::visit(
        [](const auto& fam) -> json {
            using T = std::decay_t<decltype(fam)>;
            if constexpr (std::is_same_v<T, ZeroMeasure>) {
                return {{"kind", "zero"}};
            } else if constexpr (std::is_same_v<T, AtomsMeasure>) {
                json atoms = json::array();
                for (const Atom& a : fam.atoms) atoms.push_back({{"x", a.x}, {"rate", a.rate}});
                return {{"kind", "atoms"}, {"atoms", atoms}};
            } else if constexpr (std::is_same_v<T, CompoundPoisson>) {
                json jumps = std::visit(
                    [](const auto& d) -> json {
                        using J = std::decay_t<decltype(d)>;
                        if constexpr (std::is_same_v<J, MixtureJump>) {
                            return {{"kind", "mixture"},
                                    {"weight_neg", d.weight_neg},
                                    {"neg", to_json(d.neg)},
                                    {"pos", to_json(d.pos)}};
                        } else {
                            return to_json(SimpleJump{d});
                        }
                    },
                    fam.jumps);
                return {{"kind", "compound_poisson"}, {"rate", fam.rate}, {"jumps", jumps}};
            } else if constexpr (std::is_same_v<T, PowerLawMeasure>) {
                json out = {{"kind", "power_law"}};
                if (fam.neg.c > 0) out["neg"] = to_json(fam.neg);
                if (fam.pos.c > 0) out["pos"] = to_json(fam.pos);
                return out;
            } else if constexpr (std::is_same_v<T, SumMeasure>) {
                json terms = json::array();
                for (const MeasureSpec& t : fam.terms) terms.push_back(to_json(t));
                return {{"kind", "sum"}, {"terms", terms}};
            } else {
                return {{"kind", "restricted"},
                        {"min_abs", fam.min_abs},
                        {"inner", to_json(*fam.inner)}};
            }
        },
        m.family);
}

MeasureSpec measure_from_json(const json& j, const std::string& path) {
    const std::string kind = string_field(j, path, "kind");
    if (kind == "zero") return MeasureSpec{ZeroMeasure{}};
    if (kind == "atoms") {
        const json& arr = member(j, path, "atoms");
        if (!arr.is_array()) parse_fail(path + ".atoms", "expected an array");
        AtomsMeasure out;
        for (std::size_t i = 0; i < arr.size(); ++i) {
            const std::string p = path + ".atoms[" + std::to_string(i) + "]";
            out.atoms.push_back({number_field(arr[i], p, "x"), number_field(arr[i], p, "rate")});
        }
        return MeasureSpec{out};
    }
    if (kind == "compound_poisson") {
        CompoundPoisson out;
        out.rate = number_field(j, path, "rate");
        const json& jumps = member(j, path, "jumps");
        const std::string jpath = path + ".jumps";
        const std::string jkind = string_field(jumps, jpath, "kind");
        if (jkind == "mixture") {
            MixtureJump mix;
            mix.weight_neg = number_field(jumps, jpath, "weight_neg");
            mix.neg = simple_from_json(member(jumps, jpath, "neg"), jpath + ".neg");
            mix.pos = simple_from_json(member(jumps, jpath, "pos"), jpath + ".pos");
            out.jumps = mix;
        } else {
            const SimpleJump simple = simple_from_json(jumps, jpath);
            std::visit([&](const auto& d) { out.jumps = d; }, simple);
        }
        return MeasureSpec{out};
    }
    if (kind == "power_law") {
        PowerLawMeasure out;
        if (j.contains("neg")) out.neg = power_side_from_json(j["neg"], path + ".neg");
        if (j.contains("pos")) out.pos = power_side_from_json(j["pos"], path + ".pos");
        return MeasureSpec{out};
    }
    if (kind == "sum") {
        const json& arr = member(j, path, "terms");
        if (!arr.is_array()) parse_fail(path + ".terms", "expected an array");
        SumMeasure out;
        for (std::size_t i = 0; i < arr.size(); ++i)
            out.terms.push_back(
                measure_from_json(arr[i], path + ".terms[" + std::to_string(i) + "]"));
        return MeasureSpec{out};
    }
    if (kind == "restricted") {
        return MeasureSpec{RestrictedMeasure{
            Box<MeasureSpec>(measure_from_json(member(j, path, "inner"), path + ".inner")),
            number_field(j, path, "min_abs")}};
    }
    parse_fail(path + ".kind", "unknown measure kind '" + kind + "'");
}

json to_json(const LevyModel& model) {
    json drift;
    if (const Gamma0* g = std::get_if<Gamma0>(&model.drift))
        drift = {{"kind", "gamma0"}, {"value", g->value}};
    else
        drift = {{"kind", "center"}, {"value", std::get<CenterB>(model.drift).value}};
    return {{"sigma2", model.sigma2}, {"drift", drift}, {"measure", to_json(model.measure)}};
}

LevyModel model_from_json(const json& j, const std::string& path) {
    LevyModel model;
    model.sigma2 = number_field(j, path, "sigma2");
    model.measure = measure_from_json(member(j, path, "measure"), path + ".measure");
    const json& drift = member(j, path, "drift");
    const std::string dpath = path + ".drift";
    const std::string kind = string_field(drift, dpath, "kind");
    const double value = number_field(drift, dpath, "value");
    if (kind == "gamma0")
        model.drift = Gamma0{value};
    else if (kind == "center")
        model.drift = CenterB{value};
    else
        parse_fail(dpath + ".kind", "expected \"gamma0\" or \"center\"");
    validate(model, path);
    return model;
}

json to_json(const ExitQuery& q) {
    return {{"a", q.a}, {"b", q.b}, {"m", q.m}, {"M", number_to_json(q.M)}};
}

ExitQuery query_from_json(const json& j, const std::string& path) {
    ExitQuery q;
    q.a = number_field(j, path, "a");
    q.b = number_field(j, path, "b");
    q.m = number_field(j, path, "m");
    q.M = number_field(j, path, "M", /*allow_inf=*/true);
    validate(q);
    return q;
}

json to_json(const Scenario& s) {
    json queries = json::array();
    for (const ExitQuery& q : s.queries) queries.push_back(to_json(q));
    json out = {{"name", s.name}, {"model", to_json(s.model)}, {"queries", queries}};
    if (s.paths) out["paths"] = *s.paths;
    if (s.seed) out["seed"] = *s.seed;
    if (s.alpha) out["alpha"] = *s.alpha;
    if (s.hints.horizon) out["horizon"] = *s.hints.horizon;
    if (s.hints.scheme) out["scheme"] = scheme_name(*s.hints.scheme);
    if (s.hints.dt) out["dt"] = *s.hints.dt;
    if (s.hints.delta) out["delta"] = *s.hints.delta;
    if (s.hints.gaussian_substitution)
        out["gaussian_substitution"] = *s.hints.gaussian_substitution;
    return out;
}

Scenario scenario_from_json(const json& j, const std::string& path) {
    Scenario s;
    s.name = string_field(j, path, "name");
    s.model = model_from_json(member(j, path, "model"), path + ".model");
    const json& queries = member(j, path, "queries");
    if (!queries.is_array() || queries.empty())
        parse_fail(path + ".queries", "expected a non-empty array");
    for (std::size_t i = 0; i < queries.size(); ++i)
        s.queries.push_back(
            query_from_json(queries[i], path + ".queries[" + std::to_string(i) + "]"));
    if (j.contains("paths")) {
        const double n = number_field(j, path, "paths");
        if (n < 1 || n != std::floor(n)) parse_fail(path + ".paths", "expected a positive integer");
        s.paths = static_cast<std::uint64_t>(n);
    }
    if (j.contains("seed")) s.seed = static_cast<std::uint64_t>(number_field(j, path, "seed"));
    if (j.contains("alpha")) {
        s.alpha = number_field(j, path, "alpha");
        if (*s.alpha <= 0 || *s.alpha >= 1) parse_fail(path + ".alpha", "expected alpha in (0,1)");
    }
    if (j.contains("horizon")) s.hints.horizon = number_field(j, path, "horizon");
    if (j.contains("dt")) s.hints.dt = number_field(j, path, "dt");
    if (j.contains("delta")) s.hints.delta = number_field(j, path, "delta");
    if (j.contains("gaussian_substitution")) {
        if (!j["gaussian_substitution"].is_boolean())
            parse_fail(path + ".gaussian_substitution", "expected a boolean");
        s.hints.gaussian_substitution = j["gaussian_substitution"].get<bool>();
    }
    if (j.contains("scheme")) {
        const std::string name = string_field(j, path, "scheme");
        if (name == "exact")
            s.hints.scheme = Scheme::ExactFiniteActivity;
        else if (name == "grid")
            s.hints.scheme = Scheme::GridDiffusion;
        else if (name == "truncated")
            s.hints.scheme = Scheme::TruncatedInfiniteActivity;
        else if (name != "auto")
            parse_fail(path + ".scheme", "expected auto|exact|grid|truncated");
    }
    return s;
}

std::string render_model_document(const LevyModel& model) {
    json doc = {{"schema", kSchemaTag}, {"model", to_json(model)}};
    return doc.dump(2) + "\n";
}

std::string render_scenario_document(const ScenarioFile& file) {
    json arr = json::array();
    for (const Scenario& s : file.scenarios) arr.push_back(to_json(s));
    json doc = {{"schema", kSchemaTag}, {"scenarios", arr}};
    return doc.dump(2) + "\n";
}

namespace {

json parse_document(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        fail(Errc::ParseError, std::string("document: ") + e.what());
    }
    const std::string schema = string_field(doc, "document", "schema");
    if (schema != kSchemaTag)
        parse_fail("document.schema",
                   "unsupported schema '" + schema + "' (expected '" + kSchemaTag + "')");
    return doc;
}

}  // namespace

LevyModel parse_model_document(const std::string& text) {
    const json doc = parse_document(text);
    return model_from_json(member(doc, "document", "model"), "model");
}

ScenarioFile parse_scenario_document(const std::string& text) {
    const json doc = parse_document(text);
    const json& arr = member(doc, "document", "scenarios");
    if (!arr.is_array() || arr.empty())
        parse_fail("document.scenarios", "expected a non-empty array");
    ScenarioFile file;
    std::set<std::string> names;
    for (std::size_t i = 0; i < arr.size(); ++i) {
        Scenario s = scenario_from_json(arr[i], "scenarios[" + std::to_string(i) + "]");
        if (!names.insert(s.name).second)
            parse_fail("scenarios[" + std::to_string(i) + "].name",
                       "duplicate scenario name '" + s.name + "'");
        file.scenarios.push_back(std::move(s));
    }
    return file;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(Errc::ParseError, "cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::string& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) fail(Errc::ParseError, "cannot write '" + path + "'");
    out << contents;
}

LevyModel load_model_file(const std::string& file) {
    return parse_model_document(read_file(file));
}

ScenarioFile load_scenario_file(const std::string& file) {
    return parse_scenario_document(read_file(file));
}

std::vector<CatalogEntry> to_entries(const ScenarioFile& file) {
    std::vector<CatalogEntry> entries;
    for (const Scenario& s : file.scenarios) {
        for (std::size_t i = 0; i < s.queries.size(); ++i) {
            CatalogEntry e;
            e.id = s.queries.size() == 1 ? s.name : s.name + "#" + std::to_string(i);
            e.model = s.model;
            e.query = s.queries[i];
            e.hints = s.hints;
            entries.push_back(std::move(e));
        }
    }
    return entries;
}

std::string format_number(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (std::isnan(v)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

namespace {

json plan_to_json(const SimPlan& p) {
    json out = {{"scheme", scheme_name(p.scheme)}, {"horizon", p.horizon}};
    if (p.dt) out["dt"] = *p.dt;
    if (p.delta) out["delta"] = *p.delta;
    if (p.scheme == Scheme::TruncatedInfiniteActivity)
        out["gaussian_substitution"] = p.gaussian_substitution;
    return out;
}

json estimate_to_json(const ExitEstimate& e) {
    return {{"query", to_json(e.query)},
            {"paths", e.n_paths},
            {"hits_up", e.hits_up},
            {"hits_down", e.hits_down},
            {"out_of_window", e.n_out_of_window},
            {"censored", e.n_censored},
            {"p_up", e.p_up_hat},
            {"p_down", e.p_down_hat},
            {"ci_up", {e.ci_up.lo, e.ci_up.hi}},
            {"ci_down", {e.ci_down.lo, e.ci_down.hi}},
            {"alpha", e.alpha},
            {"horizon", e.horizon},
            {"exits", e.n_exits},
            {"mean_exit_time",
             std::isnan(e.mean_exit_time) ? json() : json(e.mean_exit_time)},
            {"scheme", scheme_name(e.scheme)},
            {"seed", e.seed}};
}

const char* kEstimateHeader =
    "id\ta\tb\tm\tM\tscheme\tdt\tdelta\thorizon\tpaths\thits_up\thits_down\tout_of_window\t"
    "censored\tp_up\tci_up_lo\tci_up_hi\tp_down\tci_down_lo\tci_down_hi\tmean_exit_time\tseed";

void append_estimate_row(std::string& out, const std::string& id, const ExitEstimate& e,
                         const std::optional<double>& dt, const std::optional<double>& delta) {
    const auto n = [](double v) { return format_number(v); };
    out += id;
    out += '\t';
    out += n(e.query.a) + '\t' + n(e.query.b) + '\t' + n(e.query.m) + '\t' + n(e.query.M);
    out += '\t';
    out += scheme_name(e.scheme);
    out += '\t';
    out += (dt ? n(*dt) : std::string("-")) + '\t' + (delta ? n(*delta) : std::string("-")) +
           '\t' + n(e.horizon);
    out += '\t';
    out += std::to_string(e.n_paths) + '\t' + std::to_string(e.hits_up) + '\t' +
           std::to_string(e.hits_down) + '\t' + std::to_string(e.n_out_of_window) + '\t' +
           std::to_string(e.n_censored);
    out += '\t';
    out += n(e.p_up_hat) + '\t' + n(e.ci_up.lo) + '\t' + n(e.ci_up.hi) + '\t' + n(e.p_down_hat) +
           '\t' + n(e.ci_down.lo) + '\t' + n(e.ci_down.hi) + '\t' + n(e.mean_exit_time);
    out += '\t';
    out += std::to_string(e.seed);
}

}  // namespace

std::string to_tsv(const CrossCheckReport& report) {
    std::string out = "id\tverdict\treason\toutcome\tstatus\t";
    out += kEstimateHeader;
    out += '\n';
    for (const CrossCheckRow& r : report.rows) {
        out += r.id;
        out += '\t';
        out += verdict_name(r.verdict.value);
        out += '\t';
        out += r.verdict.reason;
        out += '\t';
        out += outcome_name(r.outcome);
        out += '\t';
        out += status_name(r.status);
        out += '\t';
        append_estimate_row(out, r.id, r.estimate, r.plan.dt, r.plan.delta);
        out += '\n';
    }
    return out;
}

json to_json(const CrossCheckReport& report) {
    json rows = json::array();
    for (const CrossCheckRow& r : report.rows) {
        rows.push_back({{"id", r.id},
                        {"verdict", verdict_name(r.verdict.value)},
                        {"reason", r.verdict.reason},
                        {"outcome", outcome_name(r.outcome)},
                        {"status", status_name(r.status)},
                        {"plan", plan_to_json(r.plan)},
                        {"estimate", estimate_to_json(r.estimate)},
                        {"seed", r.seed}});
    }
    return {{"schema", kSchemaTag},
            {"meta",
             {{"paths", report.meta.paths}, {"alpha", report.meta.alpha},
              {"seed", report.meta.seed}}},
            {"rows", rows}};
}

std::string to_tsv(const std::vector<ExitEstimate>& estimates,
                   const std::vector<std::string>& ids, const std::vector<SimPlan>& plans) {
    std::string out = kEstimateHeader;
    out += '\n';
    for (std::size_t i = 0; i < estimates.size(); ++i) {
        append_estimate_row(out, ids[i], estimates[i], plans[i].dt, plans[i].delta);
        out += '\n';
    }
    return out;
}

json to_json(const std::vector<ExitEstimate>& estimates, const std::vector<std::string>& ids,
             const std::vector<SimPlan>& plans) {
    json rows = json::array();
    for (std::size_t i = 0; i < estimates.size(); ++i) {
        json row = estimate_to_json(estimates[i]);
        row["id"] = ids[i];
        row["plan"] = plan_to_json(plans[i]);
        rows.push_back(row);
    }
    return {{"schema", kSchemaTag}, {"rows", rows}};
}

}  // namespace levyexit
