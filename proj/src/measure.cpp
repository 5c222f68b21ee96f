#include "levyexit/measure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/gamma.hpp>

namespace levyexit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kQuadRelTol = 1e-10;

bool finite_nonneg(double v) { return std::isfinite(v) && v >= 0; }

// --- tempered power-law integrals -----------------------------------------
//
// The classifier never sees these; they feed rates, moments and the sampler.
// Adaptive Gauss-Kronrod refinement to relative tolerance 1e-10; an
// independent incomplete-gamma series cross-checks them in the test suite.

template <class F>
double gk_integrate(const F& f, double lo, double hi) {
    return boost::math::quadrature::gauss_kronrod<double, 15>::integrate(f, lo, hi, 12,
                                                                         kQuadRelTol);
}

// Q(lo) = int_lo^inf x^{-1-alpha} e^{-theta x} dx, lo > 0.
double power_tail_q(double alpha, double theta, double lo) {
    if (theta == 0) return std::pow(lo, -alpha) / alpha;  // alpha > 0 by admissibility
    return gk_integrate(
        [=](double x) { return std::pow(x, -1.0 - alpha) * std::exp(-theta * x); }, lo, kInf);
}

// int_0^delta x^{1-alpha} e^{-theta x} dx (the x^2-moment kernel).
double power_x2_below(double alpha, double theta, double delta) {
    if (delta <= 0) return 0;
    if (theta == 0) return std::pow(delta, 2.0 - alpha) / (2.0 - alpha);
    return boost::math::tgamma_lower(2.0 - alpha, theta * delta) * std::pow(theta, alpha - 2.0);
}

// int_lo^hi x^{-alpha} e^{-theta x} dx, 0 < lo <= hi (the x-moment kernel).
double power_x_between(double alpha, double theta, double lo, double hi) {
    if (lo >= hi) return 0;
    if (theta == 0) {
        if (alpha == 1.0) return std::log(hi / lo);
        return (std::pow(hi, 1.0 - alpha) - std::pow(lo, 1.0 - alpha)) / (1.0 - alpha);
    }
    return gk_integrate([=](double x) { return std::pow(x, -alpha) * std::exp(-theta * x); },
                        lo, hi);
}

// --- jump-size distribution helpers (compound-Poisson family) -------------

double uniform_len(const UniformJump& u) { return u.hi - u.lo; }

// Sub-interval of (lo,hi) on `side` with |x| >= floor; empty -> lo >= hi.
std::pair<double, double> uniform_segment(const UniformJump& u, Side side, double floor) {
    if (side == Side::Pos) return {std::max(u.lo, floor), u.hi};
    return {u.lo, std::min(u.hi, -floor)};
}

bool simple_charges_above(const SimpleJump& j, Side side, double floor) {
    return std::visit(
        [&](const auto& d) -> bool {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, UniformJump>) {
                auto [lo, hi] = uniform_segment(d, side, floor);
                return lo < hi;
            } else {
                return d.side == side;  // exponential support is unbounded
            }
        },
        j);
}

std::optional<double> simple_gap_above(const SimpleJump& j, Side side, double floor) {
    return std::visit(
        [&](const auto& d) -> std::optional<double> {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, UniformJump>) {
                auto [lo, hi] = uniform_segment(d, side, floor);
                if (lo >= hi) return std::nullopt;
                return side == Side::Pos ? std::max(lo, 0.0) : -std::min(hi, 0.0);
            } else {
                if (d.side != side) return std::nullopt;
                return floor;
            }
        },
        j);
}

// P(|J| >= floor, J on side) for one simple distribution.
double simple_tail_prob(const SimpleJump& j, Side side, double floor) {
    return std::visit(
        [&](const auto& d) -> double {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, UniformJump>) {
                auto [lo, hi] = uniform_segment(d, side, floor);
                return lo < hi ? (hi - lo) / uniform_len(d) : 0.0;
            } else {
                return d.side == side ? std::exp(-floor / d.scale) : 0.0;
            }
        },
        j);
}

// E[J^2; floor <= |J| < delta, J on side].
double simple_x2_between(const SimpleJump& j, Side side, double floor, double delta) {
    if (delta <= floor) return 0;
    return std::visit(
        [&](const auto& d) -> double {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, UniformJump>) {
                double lo, hi;
                if (side == Side::Pos) {
                    lo = std::max(d.lo, floor);
                    hi = std::min(d.hi, delta);
                } else {
                    lo = std::max(d.lo, -delta);
                    hi = std::min(d.hi, -floor);
                }
                if (lo >= hi) return 0;
                return (hi * hi * hi - lo * lo * lo) / 3.0 / uniform_len(d);
            } else {
                if (d.side != side) return 0;
                const double s = d.scale;
                auto g = [s](double t) {
                    return (t * t + 2 * s * t + 2 * s * s) * std::exp(-t / s);
                };
                return g(floor) - g(delta);
            }
        },
        j);
}

// E[J; lo <= |J| <= hi, J on side] (signed).
double simple_x_between(const SimpleJump& j, Side side, double lo, double hi) {
    if (lo >= hi) return 0;
    return std::visit(
        [&](const auto& d) -> double {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, UniformJump>) {
                double l, u;
                if (side == Side::Pos) {
                    l = std::max(d.lo, lo);
                    u = std::min(d.hi, hi);
                } else {
                    l = std::max(d.lo, -hi);
                    u = std::min(d.hi, -lo);
                }
                if (l >= u) return 0;
                return (u * u - l * l) / 2.0 / uniform_len(d);
            } else {
                if (d.side != side) return 0;
                const double s = d.scale;
                auto g = [s](double t) { return (t + s) * std::exp(-t / s); };
                const double mag = g(lo) - (std::isfinite(hi) ? g(hi) : 0.0);
                return side == Side::Pos ? mag : -mag;
            }
        },
        j);
}

template <class F>
void for_each_simple(const CompoundPoisson& cp, const F& f) {
    std::visit(
        [&](const auto& d) {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, MixtureJump>) {
                if (d.weight_neg > 0) f(d.neg, d.weight_neg);
                if (d.weight_neg < 1) f(d.pos, 1.0 - d.weight_neg);
            } else {
                f(SimpleJump{d}, 1.0);
            }
        },
        cp.jumps);
}

SimpleJump mirror_simple(const SimpleJump& j) {
    return std::visit(
        [](const auto& d) -> SimpleJump {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, UniformJump>) {
                return UniformJump{-d.hi, -d.lo};
            } else {
                return ExponentialJump{d.scale, opposite(d.side)};
            }
        },
        j);
}

const PowerLawSide& power_side(const PowerLawMeasure& p, Side s) {
    return s == Side::Neg ? p.neg : p.pos;
}

// --- recursive metadata kernels (floor folds RestrictedMeasure away) ------

bool charges_above(const MeasureSpec& m, Side side, double floor);
std::optional<double> gap_above(const MeasureSpec& m, Side side, double floor);
double tail_rate_above(const MeasureSpec& m, Side side, double floor);
double x2_between(const MeasureSpec& m, double floor, double delta);
double x_between(const MeasureSpec& m, Side side, double lo, double hi);

bool charges_above(const MeasureSpec& m, Side side, double floor) {
    return std::visit(
        [&](const auto& fam) -> bool {
            using T = std::decay_t<decltype(fam)>;
            if constexpr (std::is_same_v<T, ZeroMeasure>) {
                return false;
            } else if constexpr (std::is_same_v<T, AtomsMeasure>) {
                return std::any_of(fam.atoms.begin(), fam.atoms.end(), [&](const Atom& a) {
                    return (side == Side::Pos ? a.x > 0 : a.x < 0) && std::abs(a.x) >= floor;
                });
            } else if constexpr (std::is_same_v<T, CompoundPoisson>) {
                bool any = false;
                for_each_simple(fam, [&](const SimpleJump& j, double) {
                    any = any || simple_charges_above(j, side, floor);
                });
                return any;
            } else if constexpr (std::is_same_v<T, PowerLawMeasure>) {
                return power_side(fam, side).c > 0;
            } else if constexpr (std::is_same_v<T, SumMeasure>) {
                return std::any_of(fam.terms.begin(), fam.terms.end(),
                                   [&](const MeasureSpec& t) {
                                       return charges_above(t, side, floor);
                                   });
            } else {
                return charges_above(*fam.inner, side, std::max(floor, fam.min_abs));
            }
        },
        m.family);
}

std::optional<double> gap_above(const MeasureSpec& m, Side side, double floor) {
    return std::visit(
        [&](const auto& fam) -> std::optional<double> {
            using T = std::decay_t<decltype(fam)>;
            if constexpr (std::is_same_v<T, ZeroMeasure>) {
                return std::nullopt;
            } else if constexpr (std::is_same_v<T, AtomsMeasure>) {
                std::optional<double> best;
                for (const Atom& a : fam.atoms) {
                    if ((side == Side::Pos ? a.x > 0 : a.x < 0) && std::abs(a.x) >= floor)
                        best = best ? std::min(*best, std::abs(a.x)) : std::abs(a.x);
                }
                return best;
            } else if constexpr (std::is_same_v<T, CompoundPoisson>) {
                std::optional<double> best;
                for_each_simple(fam, [&](const SimpleJump& j, double) {
                    if (auto g = simple_gap_above(j, side, floor))
                        best = best ? std::min(*best, *g) : *g;
                });
                return best;
            } else if constexpr (std::is_same_v<T, PowerLawMeasure>) {
                if (power_side(fam, side).c > 0) return floor;
                return std::nullopt;
            } else if constexpr (std::is_same_v<T, SumMeasure>) {
                std::optional<double> best;
                for (const MeasureSpec& t : fam.terms) {
                    if (auto g = gap_above(t, side, floor))
                        best = best ? std::min(*best, *g) : *g;
                }
                return best;
            } else {
                return gap_above(*fam.inner, side, std::max(floor, fam.min_abs));
            }
        },
        m.family);
}

double tail_rate_above(const MeasureSpec& m, Side side, double floor) {
    return std::visit(
        [&](const auto& fam) -> double {
            using T = std::decay_t<decltype(fam)>;
            if constexpr (std::is_same_v<T, ZeroMeasure>) {
                return 0;
            } else if constexpr (std::is_same_v<T, AtomsMeasure>) {
                double r = 0;
                for (const Atom& a : fam.atoms) {
                    if ((side == Side::Pos ? a.x > 0 : a.x < 0) && std::abs(a.x) >= floor)
                        r += a.rate;
                }
                return r;
            } else if constexpr (std::is_same_v<T, CompoundPoisson>) {
                double p = 0;
                for_each_simple(fam, [&](const SimpleJump& j, double w) {
                    p += w * simple_tail_prob(j, side, floor);
                });
                return fam.rate * p;
            } else if constexpr (std::is_same_v<T, PowerLawMeasure>) {
                const PowerLawSide& s = power_side(fam, side);
                if (s.c == 0) return 0;
                if (floor <= 0) return kInf;  // infinite activity at the origin
                return s.c * power_tail_q(s.alpha, s.theta, floor);
            } else if constexpr (std::is_same_v<T, SumMeasure>) {
                double r = 0;
                for (const MeasureSpec& t : fam.terms) r += tail_rate_above(t, side, floor);
                return r;
            } else {
                return tail_rate_above(*fam.inner, side, std::max(floor, fam.min_abs));
            }
        },
        m.family);
}

double x2_between(const MeasureSpec& m, double floor, double delta) {
    if (delta <= floor) return 0;
    return std::visit(
        [&](const auto& fam) -> double {
            using T = std::decay_t<decltype(fam)>;
            if constexpr (std::is_same_v<T, ZeroMeasure>) {
                return 0;
            } else if constexpr (std::is_same_v<T, AtomsMeasure>) {
                double v = 0;
                for (const Atom& a : fam.atoms) {
                    const double ax = std::abs(a.x);
                    if (ax >= floor && ax < delta) v += a.rate * a.x * a.x;
                }
                return v;
            } else if constexpr (std::is_same_v<T, CompoundPoisson>) {
                double v = 0;
                for_each_simple(fam, [&](const SimpleJump& j, double w) {
                    v += w * (simple_x2_between(j, Side::Neg, floor, delta) +
                              simple_x2_between(j, Side::Pos, floor, delta));
                });
                return fam.rate * v;
            } else if constexpr (std::is_same_v<T, PowerLawMeasure>) {
                double v = 0;
                for (Side s : {Side::Neg, Side::Pos}) {
                    const PowerLawSide& ps = power_side(fam, s);
                    if (ps.c > 0)
                        v += ps.c * (power_x2_below(ps.alpha, ps.theta, delta) -
                                     power_x2_below(ps.alpha, ps.theta, floor));
                }
                return v;
            } else if constexpr (std::is_same_v<T, SumMeasure>) {
                double v = 0;
                for (const MeasureSpec& t : fam.terms) v += x2_between(t, floor, delta);
                return v;
            } else {
                return x2_between(*fam.inner, std::max(floor, fam.min_abs), delta);
            }
        },
        m.family);
}

double x_between(const MeasureSpec& m, Side side, double lo, double hi) {
    if (lo >= hi) return 0;
    return std::visit(
        [&](const auto& fam) -> double {
            using T = std::decay_t<decltype(fam)>;
            if constexpr (std::is_same_v<T, ZeroMeasure>) {
                return 0;
            } else if constexpr (std::is_same_v<T, AtomsMeasure>) {
                double v = 0;
                for (const Atom& a : fam.atoms) {
                    const double ax = std::abs(a.x);
                    if ((side == Side::Pos ? a.x > 0 : a.x < 0) && ax >= lo && ax <= hi)
                        v += a.rate * a.x;
                }
                return v;
            } else if constexpr (std::is_same_v<T, CompoundPoisson>) {
                double v = 0;
                for_each_simple(fam, [&](const SimpleJump& j, double w) {
                    v += w * simple_x_between(j, side, lo, hi);
                });
                return fam.rate * v;
            } else if constexpr (std::is_same_v<T, PowerLawMeasure>) {
                const PowerLawSide& ps = power_side(fam, side);
                if (ps.c == 0) return 0;
                const double mag = ps.c * power_x_between(ps.alpha, ps.theta, lo, hi);
                return side == Side::Pos ? mag : -mag;
            } else if constexpr (std::is_same_v<T, SumMeasure>) {
                double v = 0;
                for (const MeasureSpec& t : fam.terms) v += x_between(t, side, lo, hi);
                return v;
            } else {
                return x_between(*fam.inner, side, std::max(lo, fam.min_abs), hi);
            }
        },
        m.family);
}

void validate_simple(const SimpleJump& j, Side slot, bool enforce_slot, const std::string& path) {
    std::visit(
        [&](const auto& d) {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, UniformJump>) {
                require(std::isfinite(d.lo) && std::isfinite(d.hi) && d.lo < d.hi,
                        Errc::InvalidSpec, path + ": uniform needs finite lo < hi");
                if (enforce_slot) {
                    if (slot == Side::Neg)
                        require(d.hi <= 0, Errc::InvalidSpec,
                                path + ": negative mixture component must live in (-inf,0]");
                    else
                        require(d.lo >= 0, Errc::InvalidSpec,
                                path + ": positive mixture component must live in [0,inf)");
                }
            } else {
                require(std::isfinite(d.scale) && d.scale > 0, Errc::InvalidSpec,
                        path + ": exponential scale must be > 0");
                if (enforce_slot)
                    require(d.side == slot, Errc::InvalidSpec,
                            path + ": mixture component sign does not match its slot");
            }
        },
        j);
}

}  // namespace

const char* side_name(Side s) { return s == Side::Neg ? "neg" : "pos"; }

void validate(const MeasureSpec& m, const std::string& path) {
    std::visit(
        [&](const auto& fam) {
            using T = std::decay_t<decltype(fam)>;
            if constexpr (std::is_same_v<T, ZeroMeasure>) {
                // nothing to check
            } else if constexpr (std::is_same_v<T, AtomsMeasure>) {
                for (std::size_t i = 0; i < fam.atoms.size(); ++i) {
                    const std::string p = path + ".atoms[" + std::to_string(i) + "]";
                    require(std::isfinite(fam.atoms[i].x) && fam.atoms[i].x != 0,
                            Errc::InvalidSpec, p + ".x: must be finite and nonzero");
                    require(std::isfinite(fam.atoms[i].rate) && fam.atoms[i].rate > 0,
                            Errc::InvalidSpec, p + ".rate: must be > 0");
                }
            } else if constexpr (std::is_same_v<T, CompoundPoisson>) {
                require(std::isfinite(fam.rate) && fam.rate > 0, Errc::InvalidSpec,
                        path + ".rate: must be > 0");
                std::visit(
                    [&](const auto& d) {
                        using J = std::decay_t<decltype(d)>;
                        if constexpr (std::is_same_v<J, MixtureJump>) {
                            require(d.weight_neg >= 0 && d.weight_neg <= 1, Errc::InvalidSpec,
                                    path + ".jumps.weight_neg: must be in [0,1]");
                            validate_simple(d.neg, Side::Neg, true, path + ".jumps.neg");
                            validate_simple(d.pos, Side::Pos, true, path + ".jumps.pos");
                        } else {
                            validate_simple(SimpleJump{d}, Side::Pos, false, path + ".jumps");
                        }
                    },
                    fam.jumps);
            } else if constexpr (std::is_same_v<T, PowerLawMeasure>) {
                for (Side s : {Side::Neg, Side::Pos}) {
                    const PowerLawSide& ps = power_side(fam, s);
                    const std::string p = path + "." + side_name(s);
                    require(finite_nonneg(ps.c), Errc::InvalidSpec, p + ".c: must be >= 0");
                    if (ps.c == 0) continue;
                    require(std::isfinite(ps.alpha) && ps.alpha >= 0 && ps.alpha < 2,
                            Errc::InvalidSpec, p + ".alpha: must be in [0,2)");
                    require(finite_nonneg(ps.theta), Errc::InvalidSpec,
                            p + ".theta: must be >= 0");
                    // tail mass at infinity must be finite
                    require(ps.alpha > 0 || ps.theta > 0, Errc::InvalidSpec,
                            p + ": alpha = 0 requires tempering theta > 0");
                }
            } else if constexpr (std::is_same_v<T, SumMeasure>) {
                for (std::size_t i = 0; i < fam.terms.size(); ++i)
                    validate(fam.terms[i], path + ".terms[" + std::to_string(i) + "]");
            } else {
                require(std::isfinite(fam.min_abs) && fam.min_abs > 0, Errc::InvalidSpec,
                        path + ".min_abs: must be > 0");
                validate(*fam.inner, path + ".inner");
            }
        },
        m.family);
}

bool charges(const MeasureSpec& m, Side side) { return charges_above(m, side, 0.0); }

bool small_jump_variation_finite(const MeasureSpec& m) {
    return std::visit(
        [&](const auto& fam) -> bool {
            using T = std::decay_t<decltype(fam)>;
            if constexpr (std::is_same_v<T, PowerLawMeasure>) {
                for (Side s : {Side::Neg, Side::Pos}) {
                    const PowerLawSide& ps = power_side(fam, s);
                    if (ps.c > 0 && ps.alpha >= 1) return false;
                }
                return true;
            } else if constexpr (std::is_same_v<T, SumMeasure>) {
                return std::all_of(fam.terms.begin(), fam.terms.end(),
                                   [](const MeasureSpec& t) {
                                       return small_jump_variation_finite(t);
                                   });
            } else if constexpr (std::is_same_v<T, RestrictedMeasure>) {
                return true;  // bounded away from 0
            } else {
                return true;  // finite families
            }
        },
        m.family);
}

bool finite_activity(const MeasureSpec& m) {
    return std::visit(
        [&](const auto& fam) -> bool {
            using T = std::decay_t<decltype(fam)>;
            if constexpr (std::is_same_v<T, PowerLawMeasure>) {
                return fam.neg.c == 0 && fam.pos.c == 0;
            } else if constexpr (std::is_same_v<T, SumMeasure>) {
                return std::all_of(fam.terms.begin(), fam.terms.end(),
                                   [](const MeasureSpec& t) { return finite_activity(t); });
            } else if constexpr (std::is_same_v<T, RestrictedMeasure>) {
                return true;
            } else {
                return true;
            }
        },
        m.family);
}

std::optional<double> support_gap(const MeasureSpec& m, Side side) {
    return gap_above(m, side, 0.0);
}

bool zero_in_support(const MeasureSpec& m, Side side) {
    const auto gap = support_gap(m, side);
    return gap.has_value() && *gap == 0;
}

std::optional<SupportEdge> negative_support_sup(const MeasureSpec& m) {
    const auto gap = support_gap(m, Side::Neg);
    if (!gap) return std::nullopt;
    return SupportEdge{*gap, *gap == 0};
}

double truncated_second_moment(const MeasureSpec& m, double delta) {
    require(std::isfinite(delta) && delta > 0, Errc::InvalidSpec,
            "truncated_second_moment: delta must be > 0");
    return x2_between(m, 0.0, delta);
}

double tail_rate(const MeasureSpec& m, double delta) {
    return tail_rate(m, delta, Side::Neg) + tail_rate(m, delta, Side::Pos);
}

double tail_rate(const MeasureSpec& m, double delta, Side side) {
    require(delta >= 0 && !std::isnan(delta), Errc::InvalidSpec,
            "tail_rate: delta must be >= 0");
    return tail_rate_above(m, side, delta);
}

double signed_mean_between(const MeasureSpec& m, double lo, double hi) {
    require(lo >= 0 && hi >= lo, Errc::InvalidSpec, "signed_mean_between: need 0 <= lo <= hi");
    return x_between(m, Side::Neg, lo, hi) + x_between(m, Side::Pos, lo, hi);
}

MeasureSpec mirror(const MeasureSpec& m) {
    return std::visit(
        [&](const auto& fam) -> MeasureSpec {
            using T = std::decay_t<decltype(fam)>;
            if constexpr (std::is_same_v<T, ZeroMeasure>) {
                return MeasureSpec{ZeroMeasure{}};
            } else if constexpr (std::is_same_v<T, AtomsMeasure>) {
                AtomsMeasure out;
                out.atoms.reserve(fam.atoms.size());
                for (const Atom& a : fam.atoms) out.atoms.push_back({-a.x, a.rate});
                return MeasureSpec{out};
            } else if constexpr (std::is_same_v<T, CompoundPoisson>) {
                CompoundPoisson out{fam.rate, UniformJump{}};
                std::visit(
                    [&](const auto& d) {
                        using J = std::decay_t<decltype(d)>;
                        if constexpr (std::is_same_v<J, MixtureJump>) {
                            out.jumps = MixtureJump{1.0 - d.weight_neg, mirror_simple(d.pos),
                                                    mirror_simple(d.neg)};
                        } else if constexpr (std::is_same_v<J, UniformJump>) {
                            out.jumps = UniformJump{-d.hi, -d.lo};
                        } else {
                            out.jumps = ExponentialJump{d.scale, opposite(d.side)};
                        }
                    },
                    fam.jumps);
                return MeasureSpec{out};
            } else if constexpr (std::is_same_v<T, PowerLawMeasure>) {
                return MeasureSpec{PowerLawMeasure{fam.pos, fam.neg}};
            } else if constexpr (std::is_same_v<T, SumMeasure>) {
                SumMeasure out;
                out.terms.reserve(fam.terms.size());
                for (const MeasureSpec& t : fam.terms) out.terms.push_back(mirror(t));
                return MeasureSpec{out};
            } else {
                return MeasureSpec{RestrictedMeasure{Box<MeasureSpec>(mirror(*fam.inner)),
                                                     fam.min_abs}};
            }
        },
        m.family);
}

// ---------------------------------------------------------------------------
// Sampling
// ---------------------------------------------------------------------------

namespace {

draw::PowerTail make_power_tail(const PowerLawSide& s, Side side, double floor) {
    draw::PowerTail p;
    p.alpha = s.alpha;
    p.theta = s.theta;
    p.floor = floor;
    p.side = side;
    if (s.theta > 0) {
        p.xc = std::max(floor, 1.0 / s.theta);
        if (p.xc > floor) {
            p.env_a = s.alpha > 0
                          ? std::exp(-s.theta * floor) *
                                (std::pow(floor, -s.alpha) - std::pow(p.xc, -s.alpha)) / s.alpha
                          : std::exp(-s.theta * floor) * std::log(p.xc / floor);
        }
        p.env_b = std::pow(p.xc, -1.0 - s.alpha) * std::exp(-s.theta * p.xc) / s.theta;
    }
    return p;
}

double draw_power_tail(const draw::PowerTail& p, Philox& rng) {
    double mag;
    if (p.theta == 0) {
        mag = p.floor * std::pow(1.0 - rng.uniform01(), -1.0 / p.alpha);
    } else {
        for (;;) {
            if (rng.uniform01() * (p.env_a + p.env_b) < p.env_a) {
                // power-law envelope on [floor, xc]; accept against the tempering
                const double v = rng.uniform01();
                double x;
                if (p.alpha > 0) {
                    const double fa = std::pow(p.floor, -p.alpha);
                    const double fc = std::pow(p.xc, -p.alpha);
                    x = std::pow(fa - v * (fa - fc), -1.0 / p.alpha);
                } else {
                    x = p.floor * std::exp(v * std::log(p.xc / p.floor));
                }
                if (rng.uniform01() < std::exp(-p.theta * (x - p.floor))) {
                    mag = x;
                    break;
                }
            } else {
                // shifted-exponential envelope on [xc, inf); accept against x^{-1-alpha}
                const double x = p.xc + rng.exponential(p.theta);
                if (rng.uniform01() < std::pow(p.xc / x, 1.0 + p.alpha)) {
                    mag = x;
                    break;
                }
            }
        }
    }
    return p.side == Side::Neg ? -mag : mag;
}

void collect_components(const MeasureSpec& m, double floor, JumpSampler& out) {
    std::visit(
        [&](const auto& fam) {
            using T = std::decay_t<decltype(fam)>;
            if constexpr (std::is_same_v<T, ZeroMeasure>) {
                // no jumps
            } else if constexpr (std::is_same_v<T, AtomsMeasure>) {
                draw::Atoms atoms;
                double total = 0;
                for (const Atom& a : fam.atoms) {
                    if (std::abs(a.x) >= floor) {
                        atoms.x.push_back(a.x);
                        total += a.rate;
                        atoms.cum.push_back(total);
                    }
                }
                if (total > 0) {
                    for (double& c : atoms.cum) c /= total;
                    atoms.cum.back() = 1.0;
                    out.add(total, std::move(atoms));
                }
            } else if constexpr (std::is_same_v<T, CompoundPoisson>) {
                for_each_simple(fam, [&](const SimpleJump& j, double w) {
                    std::visit(
                        [&](const auto& d) {
                            using J = std::decay_t<decltype(d)>;
                            if constexpr (std::is_same_v<J, UniformJump>) {
                                for (Side s : {Side::Neg, Side::Pos}) {
                                    auto [lo, hi] = uniform_segment(d, s, floor);
                                    if (lo < hi)
                                        out.add(fam.rate * w * (hi - lo) / uniform_len(d),
                                                draw::Interval{lo, hi});
                                }
                            } else {
                                const double mass =
                                    fam.rate * w * std::exp(-floor / d.scale);
                                if (mass > 0)
                                    out.add(mass, draw::ShiftedExp{floor, d.scale, d.side});
                            }
                        },
                        j);
                });
            } else if constexpr (std::is_same_v<T, PowerLawMeasure>) {
                for (Side s : {Side::Neg, Side::Pos}) {
                    const PowerLawSide& ps = power_side(fam, s);
                    if (ps.c > 0)
                        out.add(ps.c * power_tail_q(ps.alpha, ps.theta, floor),
                                make_power_tail(ps, s, floor));
                }
            } else if constexpr (std::is_same_v<T, SumMeasure>) {
                for (const MeasureSpec& t : fam.terms) collect_components(t, floor, out);
            } else {
                collect_components(*fam.inner, std::max(floor, fam.min_abs), out);
            }
        },
        m.family);
}

}  // namespace

void JumpSampler::add(double weight, draw::Impl impl) {
    if (weight <= 0) return;
    total_ += weight;
    comps_.push_back({total_, std::move(impl)});
}

double JumpSampler::operator()(Philox& rng) const {
    const double u = rng.uniform01() * total_;
    std::size_t idx = comps_.size() - 1;
    for (std::size_t i = 0; i < comps_.size(); ++i) {
        if (u < comps_[i].cum) {
            idx = i;
            break;
        }
    }
    return std::visit(
        [&](const auto& d) -> double {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, draw::Atoms>) {
                const double v = rng.uniform01();
                const auto it = std::upper_bound(d.cum.begin(), d.cum.end(), v);
                return d.x[std::min<std::size_t>(it - d.cum.begin(), d.x.size() - 1)];
            } else if constexpr (std::is_same_v<T, draw::Interval>) {
                return d.lo + rng.uniform01() * (d.hi - d.lo);
            } else if constexpr (std::is_same_v<T, draw::ShiftedExp>) {
                const double x = d.start + rng.exponential(1.0 / d.scale);
                return d.side == Side::Neg ? -x : x;
            } else {
                return draw_power_tail(d, rng);
            }
        },
        comps_[idx].impl);
}

LargeJumpLaw large_jump_law(const MeasureSpec& m, double delta) {
    require(delta >= 0 && std::isfinite(delta), Errc::InvalidSpec,
            "large_jump_law: delta must be finite and >= 0");
    if (delta == 0 && !finite_activity(m))
        fail(Errc::InfiniteRate, "large_jump_law: delta = 0 on an infinite-activity measure");
    LargeJumpLaw law;
    collect_components(m, delta, law.sampler);
    law.rate = law.sampler.total_weight();
    return law;
}

}  // namespace levyexit
