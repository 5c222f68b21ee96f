#pragma once

// Built-in witness models and the default verification campaign.
//
// The six witnesses realize every feasible truth vector of the four exit
// predicates (proper, before, after, full). Under the lattice identities
// full = before AND after and X => proper, exactly five vectors are
// feasible; the witnesses cover all five, so every pair of predicates is
// separated by some witness in at least one direction.

#include <vector>

#include "levyexit/catalog_fwd.hpp"
#include "levyexit/model.hpp"

namespace levyexit {

struct Witness {
    std::string name;
    LevyModel model;
    std::string note;
};

const std::vector<Witness>& witness_catalog();

/// Reference model: unit drift up, rate-1 atoms of size -2. Sits exactly on
/// the sharp thresholds of the refined window rules, so most verification
/// rows use it.
LevyModel reference_model_ma();

/// Rows spanning every rule tag of the interval decision, all with
/// closed-form hit probabilities comfortably above 1e-3 on Positive rows.
const std::vector<CatalogEntry>& builtin_verification();

}  // namespace levyexit
