#pragma once

#include <string>

#include "levyexit/classifier.hpp"
#include "levyexit/sampler.hpp"

namespace levyexit {

// One (model, query) row of a verification campaign.
struct CatalogEntry {
    std::string id;
    LevyModel model;
    ExitQuery query;
    PlanHints hints;
};

}  // namespace levyexit
