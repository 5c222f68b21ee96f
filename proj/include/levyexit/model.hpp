#pragma once

// A process model is the triplet (sigma2, measure, drift). The drift datum
// follows the variation split: finite-variation measures carry the linear
// slope gamma0 (zero-truncation convention), infinite-variation measures
// carry a center relative to the truncation 1_{|x|<=1}. The classifier never
// reads the center; the sampler folds it into a surrogate slope.

#include <string>
#include <variant>

#include "levyexit/measure.hpp"

namespace levyexit {

struct Gamma0 {
    double value = 0;
    bool operator==(const Gamma0&) const = default;
};

struct CenterB {
    double value = 0;
    bool operator==(const CenterB&) const = default;
};

using Drift = std::variant<Gamma0, CenterB>;

struct LevyModel {
    double sigma2 = 0;  // diffusion coefficient, >= 0
    MeasureSpec measure;
    Drift drift = Gamma0{0};

    bool operator==(const LevyModel&) const = default;
};

/// Throws Error{InvalidSpec} unless sigma2 >= 0, the measure is admissible,
/// and the drift kind matches the variation of the measure.
void validate(const LevyModel& model, const std::string& path = "model");

/// Linear slope of a finite-variation model (requires Gamma0 drift).
double gamma0(const LevyModel& model);

/// Truncated center of an infinite-variation model (requires CenterB drift).
double center(const LevyModel& model);

/// Image of the model under x -> -x.
LevyModel mirror(const LevyModel& model);

}  // namespace levyexit
