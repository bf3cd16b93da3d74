#pragma once

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "ringtight/errors.hpp"
#include "ringtight/interaction_matrix.hpp"
#include "ringtight/model.hpp"
#include "ringtight/plan.hpp"

namespace ringtight {

struct LoadStats {
    double mean = 0.0;
    double std = 0.0;   // sample standard deviation (n-1); 0 for a single bolt
    double min = 0.0;
    double max = 0.0;
};

/// Statistics over the tightened bolts only.
inline LoadStats load_stats(const LoadVector& loads) {
    std::vector<double> v = loads.tightened_values();
    if (v.empty()) throw ValidationError("load_stats: no tightened bolts");
    LoadStats s;
    double sum = 0.0;
    s.min = v.front();
    s.max = v.front();
    for (double x : v) {
        sum += x;
        s.min = std::min(s.min, x);
        s.max = std::max(s.max, x);
    }
    s.mean = sum / static_cast<double>(v.size());
    if (v.size() > 1) {
        double ss = 0.0;
        for (double x : v) ss += (x - s.mean) * (x - s.mean);
        s.std = std::sqrt(ss / static_cast<double>(v.size() - 1));
    }
    return s;
}

/// Mean over bolts of |observed - reference| / reference.
inline double avg_relative_error(const LoadVector& observed, const LoadVector& reference) {
    if (observed.size() != reference.size())
        throw ValidationError("avg_relative_error: length mismatch");
    if (observed.size() == 0) throw ValidationError("avg_relative_error: empty input");
    double sum = 0.0;
    for (int p = 1; p <= observed.size(); ++p) {
        double ref = reference.at(p);
        if (ref == 0.0)
            throw ValidationError("avg_relative_error: zero reference entry at position " +
                                  std::to_string(p));
        sum += std::abs(observed.at(p) - ref) / ref;
    }
    return sum / static_cast<double>(observed.size());
}

inline double matrix_max_abs_diff(const InteractionMatrix& a, const InteractionMatrix& b) {
    if (a.size() != b.size())
        throw ValidationError("matrix_max_abs_diff: dimension mismatch");
    double worst = 0.0;
    for (int i = 1; i <= a.size(); ++i)
        for (int j = 1; j <= a.size(); ++j)
            worst = std::max(worst, std::abs(a.at(i, j) - b.at(i, j)));
    return worst;
}

/// One warning per bolt whose planned initial load exceeds
/// warn_fraction * yield_load. Never fails; no yield_load, no warnings.
inline std::vector<std::string> yield_check(const AssemblyPlan& plan, const JointSpec& spec) {
    std::vector<std::string> warnings;
    if (!spec.yield_load) return warnings;
    const double threshold = spec.warn_fraction * *spec.yield_load;
    for (int p = 1; p <= plan.initial_loads.size(); ++p) {
        if (!plan.initial_loads.is_tightened(p)) continue;
        double si = plan.initial_loads.at(p);
        if (si > threshold) {
            std::ostringstream msg;
            msg << "bolt " << p << ": initial load " << si << " kN exceeds "
                << spec.warn_fraction * 100.0 << "% of yield load (" << *spec.yield_load
                << " kN)";
            warnings.push_back(msg.str());
        }
    }
    return warnings;
}

}  // namespace ringtight
