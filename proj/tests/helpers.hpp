#pragma once

// Shared builders for test models.

#include <vector>

#include "levyexit/model.hpp"

namespace levyexit::testing {

inline MeasureSpec atoms(std::vector<Atom> v) { return MeasureSpec{AtomsMeasure{std::move(v)}}; }

inline MeasureSpec cp_uniform(double rate, double lo, double hi) {
    return MeasureSpec{CompoundPoisson{rate, UniformJump{lo, hi}}};
}

inline MeasureSpec cp_exp(double rate, double scale, Side side) {
    return MeasureSpec{CompoundPoisson{rate, ExponentialJump{scale, side}}};
}

inline MeasureSpec power_measure(PowerLawSide neg, PowerLawSide pos) {
    return MeasureSpec{PowerLawMeasure{neg, pos}};
}

inline MeasureSpec power_pos(double c, double alpha, double theta) {
    return power_measure({}, {c, alpha, theta});
}

inline MeasureSpec power_neg(double c, double alpha, double theta) {
    return power_measure({c, alpha, theta}, {});
}

inline MeasureSpec sum_measure(std::vector<MeasureSpec> terms) {
    return MeasureSpec{SumMeasure{std::move(terms)}};
}

inline MeasureSpec restricted(MeasureSpec inner, double floor) {
    return MeasureSpec{RestrictedMeasure{Box<MeasureSpec>(std::move(inner)), floor}};
}

inline LevyModel fv_model(double sigma2, MeasureSpec measure, double g0) {
    return {sigma2, std::move(measure), Gamma0{g0}};
}

inline LevyModel iv_model(double sigma2, MeasureSpec measure, double center) {
    return {sigma2, std::move(measure), CenterB{center}};
}

}  // namespace levyexit::testing
