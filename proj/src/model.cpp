#include "levyexit/model.hpp"

#include <cmath>

namespace levyexit {

void validate(const LevyModel& model, const std::string& path) {
    require(std::isfinite(model.sigma2) && model.sigma2 >= 0, Errc::InvalidSpec,
            path + ".sigma2: must be finite and >= 0");
    validate(model.measure, path + ".measure");
    const bool fv = small_jump_variation_finite(model.measure);
    if (std::holds_alternative<Gamma0>(model.drift)) {
        require(fv, Errc::InvalidSpec,
                path + ".drift: gamma0 is defined only for finite-variation measures");
        require(std::isfinite(std::get<Gamma0>(model.drift).value), Errc::InvalidSpec,
                path + ".drift.value: must be finite");
    } else {
        require(!fv, Errc::InvalidSpec,
                path + ".drift: infinite-variation measures must carry a center");
        require(std::isfinite(std::get<CenterB>(model.drift).value), Errc::InvalidSpec,
                path + ".drift.value: must be finite");
    }
}

double gamma0(const LevyModel& model) {
    const Gamma0* g = std::get_if<Gamma0>(&model.drift);
    require(g != nullptr, Errc::InvalidSpec, "gamma0 requested on an infinite-variation model");
    return g->value;
}

double center(const LevyModel& model) {
    const CenterB* c = std::get_if<CenterB>(&model.drift);
    require(c != nullptr, Errc::InvalidSpec, "center requested on a finite-variation model");
    return c->value;
}

LevyModel mirror(const LevyModel& model) {
    LevyModel out;
    out.sigma2 = model.sigma2;
    out.measure = mirror(model.measure);
    if (const Gamma0* g = std::get_if<Gamma0>(&model.drift))
        out.drift = Gamma0{-g->value};
    else
        out.drift = CenterB{-std::get<CenterB>(model.drift).value};
    return out;
}

}  // namespace levyexit
