#include "levyexit/catalog.hpp"

#include <limits>

namespace levyexit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

LevyModel atoms_model(std::vector<Atom> atoms, double g0, double sigma2 = 0) {
    return {sigma2, MeasureSpec{AtomsMeasure{std::move(atoms)}}, Gamma0{g0}};
}

LevyModel exp_jump_model(Side side, double rate, double scale, double g0) {
    return {0.0, MeasureSpec{CompoundPoisson{rate, ExponentialJump{scale, side}}}, Gamma0{g0}};
}

LevyModel brownian_model() { return {1.0, MeasureSpec{ZeroMeasure{}}, Gamma0{0}}; }

LevyModel symmetric_stable15() {
    PowerLawMeasure p;
    p.neg = {1.0, 1.5, 0.0};
    p.pos = {1.0, 1.5, 0.0};
    return {0.0, MeasureSpec{p}, CenterB{0}};
}

}  // namespace

LevyModel reference_model_ma() { return atoms_model({{-2.0, 1.0}}, +1.0); }

const std::vector<Witness>& witness_catalog() {
    static const std::vector<Witness> witnesses = {
        {"subordinator", atoms_model({{+1.0, 1.0}}, 0.0),
         "monotone: both boundaries never compete"},
        {"prop1-not-prop2", atoms_model({{+1.0, 1.0}}, -1.0),
         "proper, but early two-sided exits impossible"},
        {"prop2-not-prop5", atoms_model({{-2.0, 1.0}, {+2.0, 1.0}}, +1.0),
         "early exits on both sides, late ones outrun by the drift"},
        {"prop5-not-prop2", exp_jump_model(Side::Pos, 1.0, 1.0, -1.0),
         "late exits on both sides, early ones one-sided"},
        {"corollary", atoms_model({{-1.0, 1.0}, {+1.0, 1.0}}, 0.0),
         "every window sees both boundaries"},
        {"brownian", brownian_model(), "diffusive: every window sees both boundaries"},
    };
    return witnesses;
}

const std::vector<CatalogEntry>& builtin_verification() {
    static const std::vector<CatalogEntry> entries = [] {
        const LevyModel ma = reference_model_ma();
        const LevyModel zero{0.0, MeasureSpec{ZeroMeasure{}}, Gamma0{0}};
        const LevyModel drift_down{0.0, MeasureSpec{ZeroMeasure{}}, Gamma0{-1.0}};
        const LevyModel subordinator = atoms_model({{+1.0, 1.0}}, 0.0);
        const LevyModel two_sided = atoms_model({{-1.0, 1.0}, {+1.0, 1.0}}, 0.0);
        const LevyModel exp_up = exp_jump_model(Side::Pos, 1.0, 1.0, -1.0);

        std::vector<CatalogEntry> rows;
        // monotone verdicts (Zero by construction, exact scheme)
        rows.push_back({"zero-process", zero, {1, 1, 0, kInf}, {}});
        rows.push_back({"subordinator-up", subordinator, {1, 1, 0, kInf}, {}});
        rows.push_back({"drift-down", drift_down, {1, 1, 0, kInf}, {}});
        // full-line window
        rows.push_back({"ma-proper", ma, {1, 1, 0, kInf}, {}});
        // early windows: both-sided model, then the sharp drift threshold
        rows.push_back({"two-sided-early", two_sided, {0.5, 0.5, 0, 0.3}, {}});
        rows.push_back({"ma-early-open", ma, {1, 1, 0, 1.1}, {}});
        rows.push_back({"ma-early-shut", ma, {1, 1, 0, 0.9}, {}});
        // late windows: balanced model, then both late routes and the shut case
        rows.push_back({"exp-up-late", exp_up, {1, 1, 0.5, kInf}, {}});
        rows.push_back({"ma-late-drift-route", ma, {1, 1, 0.5, kInf}, {}});
        rows.push_back({"ma-late-width-route", ma, {1, 1.5, 1, kInf}, {}});
        rows.push_back({"ma-late-shut", ma, {1, 1, 1, kInf}, {}});
        // bounded windows: corollary class, window monotonicity, and the gap
        rows.push_back({"two-sided-window", two_sided, {0.5, 0.5, 1, 2}, {}});
        rows.push_back({"ma-window-shut", ma, {1, 1, 1.2, 1.8}, {}});
        rows.push_back({"ma-window-gap", ma, {1, 1, 0.5, 1.5}, {}});
        // approximate schemes on Positive verdicts
        rows.push_back({"brownian", brownian_model(), {0.75, 0.75, 0, kInf}, {}});
        rows.push_back({"stable-1.5", symmetric_stable15(), {0.75, 0.75, 0, kInf}, {}});
        return rows;
    }();
    return entries;
}

}  // namespace levyexit
