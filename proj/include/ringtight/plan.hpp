#pragma once

#include <string>
#include <vector>

#include "ringtight/model.hpp"
#include "ringtight/pattern.hpp"

namespace ringtight {

/// A complete one-pass tightening plan: what to apply at each position, the
/// final loads the bench predicts for it, and any yield warnings.
struct AssemblyPlan {
    TighteningPattern pattern;
    LoadVector initial_loads;
    LoadVector predicted_final_loads;
    std::vector<std::string> warnings;
};

}  // namespace ringtight
