#pragma once

// Parametric jump-intensity measures with exact metadata.
//
// The measure catalog is closed on purpose: every predicate the exit
// classifier needs ("does the measure charge a half-line", "is the
// small-jump variation integral finite", "does the support reach 0",
// "how far from 0 does the negative support start") is answered in closed
// form from family parameters, never by numeric integration. Rates and
// moments of tempered power-law tails are the one place quadrature enters,
// and those feed the sampler, not the classifier.

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "levyexit/errors.hpp"
#include "levyexit/rng.hpp"

namespace levyexit {

enum class Side { Neg, Pos };

inline Side opposite(Side s) { return s == Side::Neg ? Side::Pos : Side::Neg; }
const char* side_name(Side s);

// Value-semantic heap box; lets a variant alternative hold the enclosing type.
template <class T>
class Box {
public:
    Box() : p_(new T{}) {}
    Box(T v) : p_(new T(std::move(v))) {}
    Box(const Box& o) : p_(new T(*o.p_)) {}
    Box(Box&&) noexcept = default;
    Box& operator=(const Box& o) {
        if (this != &o) p_.reset(new T(*o.p_));
        return *this;
    }
    Box& operator=(Box&&) noexcept = default;

    T& operator*() { return *p_; }
    const T& operator*() const { return *p_; }
    T* operator->() { return p_.get(); }
    const T* operator->() const { return p_.get(); }

    bool operator==(const Box& o) const { return *p_ == *o.p_; }

private:
    std::unique_ptr<T> p_;
};

// ---------------------------------------------------------------------------
// Families
// ---------------------------------------------------------------------------

struct ZeroMeasure {
    bool operator==(const ZeroMeasure&) const = default;
};

struct Atom {
    double x = 0;     // jump size, never 0
    double rate = 0;  // events per unit time, > 0
    bool operator==(const Atom&) const = default;
};

struct AtomsMeasure {
    std::vector<Atom> atoms;
    bool operator==(const AtomsMeasure&) const = default;
};

// Jump-size distributions for the compound-Poisson family.
struct UniformJump {
    double lo = 0, hi = 0;  // density 1/(hi-lo) on (lo,hi); may straddle 0
    bool operator==(const UniformJump&) const = default;
};

struct ExponentialJump {
    double scale = 1;       // |x| ~ Exp(mean = scale)
    Side side = Side::Pos;  // sign of the jumps
    bool operator==(const ExponentialJump&) const = default;
};

using SimpleJump = std::variant<UniformJump, ExponentialJump>;

// Two-sided mixture: w.p. weight_neg draw from `neg` (supported in (-inf,0]),
// otherwise from `pos` (supported in [0,inf)).
struct MixtureJump {
    double weight_neg = 0.5;
    SimpleJump neg;
    SimpleJump pos;
    bool operator==(const MixtureJump&) const = default;
};

using JumpDist = std::variant<UniformJump, ExponentialJump, MixtureJump>;

struct CompoundPoisson {
    double rate = 1;  // total jump rate, > 0
    JumpDist jumps;
    bool operator==(const CompoundPoisson&) const = default;
};

// One tempered power-law half-line: density c |x|^{-1-alpha} e^{-theta|x|}.
// alpha in [0,2); theta > 0 is required when alpha = 0 (untempered tail mass
// would diverge). Any active side has infinite activity at the origin.
struct PowerLawSide {
    double c = 0;      // intensity, >= 0 (0 disables the side)
    double alpha = 0;  // stability index, in [0,2)
    double theta = 0;  // exponential tempering, >= 0
    bool operator==(const PowerLawSide&) const = default;
};

struct PowerLawMeasure {
    PowerLawSide neg;
    PowerLawSide pos;
    bool operator==(const PowerLawMeasure&) const = default;
};

struct MeasureSpec;

struct SumMeasure {
    std::vector<MeasureSpec> terms;
    bool operator==(const SumMeasure&) const = default;
};

// Restriction of a measure to {|x| >= min_abs}. This is how small-jump
// truncation stays inside the catalog: the surrogate built by the sampler is
// again a MeasureSpec, with every metadata query answered exactly.
struct RestrictedMeasure {
    Box<MeasureSpec> inner;
    double min_abs = 0;  // > 0
    bool operator==(const RestrictedMeasure&) const = default;
};

struct MeasureSpec {
    using Family = std::variant<ZeroMeasure, AtomsMeasure, CompoundPoisson, PowerLawMeasure,
                                SumMeasure, RestrictedMeasure>;
    Family family = ZeroMeasure{};

    MeasureSpec() = default;
    MeasureSpec(Family f) : family(std::move(f)) {}
    bool operator==(const MeasureSpec&) const = default;
};

// Throws Error{InvalidSpec} with `path`-prefixed field diagnostics.
void validate(const MeasureSpec& m, const std::string& path = "measure");

// ---------------------------------------------------------------------------
// Exact metadata (classifier inputs)
// ---------------------------------------------------------------------------

/// True iff the measure puts positive mass on the open half-line.
bool charges(const MeasureSpec& m, Side side);

/// True iff the small-jump variation integral of (1 and |x|) is finite.
bool small_jump_variation_finite(const MeasureSpec& m);

/// True iff the total mass is finite (compound-Poisson-representable).
bool finite_activity(const MeasureSpec& m);

/// Distance from 0 to the nearest support point on the given side;
/// nullopt when the side carries no mass. 0 means the support reaches 0.
std::optional<double> support_gap(const MeasureSpec& m, Side side);

/// 0 in supp(measure restricted to the closed half-line of `side`)?
bool zero_in_support(const MeasureSpec& m, Side side);

struct SupportEdge {
    double w = 0;                 // -sup supp(measure | (-inf,0)); 0 when the support reaches 0
    bool zero_in_support = false;
    bool operator==(const SupportEdge&) const = default;
};

/// Edge of the negative jump support; nullopt when nothing is charged below 0.
std::optional<SupportEdge> negative_support_sup(const MeasureSpec& m);

/// Integral of x^2 over {|x| < delta}.
double truncated_second_moment(const MeasureSpec& m, double delta);

/// Mass of {|x| >= delta}. +inf when delta = 0 on an infinite-activity family.
double tail_rate(const MeasureSpec& m, double delta);
double tail_rate(const MeasureSpec& m, double delta, Side side);

/// Signed integral of x over {lo <= |x| <= hi} (drift re-centering input).
double signed_mean_between(const MeasureSpec& m, double lo, double hi);

/// Image of the measure under x -> -x.
MeasureSpec mirror(const MeasureSpec& m);

// ---------------------------------------------------------------------------
// Jump sampling
// ---------------------------------------------------------------------------

namespace draw {

// Finite support: atoms with cumulative weights (inverse transform).
struct Atoms {
    std::vector<double> x;
    std::vector<double> cum;  // cumulative, last = 1
};

// Uniform on [lo, hi].
struct Interval {
    double lo = 0, hi = 0;
};

// |x| = start + Exp(mean = scale), sign by side (memoryless restriction).
struct ShiftedExp {
    double start = 0;
    double scale = 1;
    Side side = Side::Pos;
};

// |x| on [floor, inf) with density proportional to x^{-1-alpha} e^{-theta x}.
// theta = 0: exact inverse transform. theta > 0: exact two-piece rejection
// (power-law envelope near the floor, shifted-exponential envelope past xc).
struct PowerTail {
    double alpha = 0;
    double theta = 0;
    double floor = 0;
    Side side = Side::Pos;
    double xc = 0;    // envelope split point
    double env_a = 0; // envelope masses of the two pieces
    double env_b = 0;
};

using Impl = std::variant<Atoms, Interval, ShiftedExp, PowerTail>;

}  // namespace draw

// Draws jump sizes from the normalized restriction of a measure to
// {|x| >= delta}. Immutable after construction; safe to share across threads
// (the RNG handle carries all state).
class JumpSampler {
public:
    void add(double weight, draw::Impl impl);
    bool empty() const { return comps_.empty(); }
    double total_weight() const { return total_; }

    double operator()(Philox& rng) const;

private:
    struct Component {
        double cum = 0;  // cumulative weight
        draw::Impl impl;
    };
    std::vector<Component> comps_;
    double total_ = 0;
};

struct LargeJumpLaw {
    double rate = 0;  // measure of {|x| >= delta}
    JumpSampler sampler;
};

/// Rate and sampler of the jumps with |x| >= delta. delta = 0 is allowed only
/// for finite-activity measures; otherwise throws Error{InfiniteRate}.
LargeJumpLaw large_jump_law(const MeasureSpec& m, double delta);

}  // namespace levyexit
