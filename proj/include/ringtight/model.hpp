#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ringtight/errors.hpp"

namespace ringtight {

/// All internal computation is in kN. Inputs may declare N and are
/// converted once, at the parsing boundary.
enum class ForceUnit { kilonewton, newton };

inline double to_kilonewtons(double value, ForceUnit unit) {
    return unit == ForceUnit::newton ? value / 1000.0 : value;
}

/// The scenario frame: ring size, the uniform load wanted at the end of
/// the sequence, and optional yield bookkeeping for warnings.
struct JointSpec {
    int n_bolts = 0;
    double target_load = 0.0;                // kN
    std::optional<double> yield_load;        // kN
    double warn_fraction = 0.9;              // warn above warn_fraction * yield_load
    std::string scenario_label;              // freeform, carried through reports
};

/// Validates every JointSpec invariant; each violation message names
/// exactly one field. Returns the spec unchanged when all hold.
inline JointSpec validate_spec(const JointSpec& spec) {
    std::vector<std::string> problems;
    if (spec.n_bolts < 2)
        problems.push_back("n_bolts below minimum");
    if (!(spec.target_load > 0.0))
        problems.push_back("target_load must be positive");
    if (spec.yield_load && !(*spec.yield_load > 0.0))
        problems.push_back("yield_load must be positive");
    if (!(spec.warn_fraction > 0.0) || spec.warn_fraction > 1.0)
        problems.push_back("warn_fraction outside (0, 1]");
    if (!problems.empty()) {
        std::string msg = problems.front();
        for (std::size_t i = 1; i < problems.size(); ++i) msg += "; " + problems[i];
        throw ValidationError(msg);
    }
    return spec;
}

/// Per-bolt loads indexed by ring position 1..n. A position carries zero
/// load until it has been tightened.
class LoadVector {
public:
    LoadVector() = default;

    explicit LoadVector(int n_bolts)
        : loads_(static_cast<std::size_t>(check_size(n_bolts)), 0.0),
          tightened_(static_cast<std::size_t>(n_bolts), false) {}

    static LoadVector uniform(int n_bolts, double load) {
        LoadVector v(n_bolts);
        for (int p = 1; p <= n_bolts; ++p) v.set(p, load);
        return v;
    }

    /// Every position tightened with the given per-position values.
    static LoadVector from_values(const std::vector<double>& values) {
        LoadVector v(static_cast<int>(values.size()));
        for (int p = 1; p <= v.size(); ++p) v.set(p, values[static_cast<std::size_t>(p - 1)]);
        return v;
    }

    int size() const { return static_cast<int>(loads_.size()); }

    double at(int position) const { return loads_[index(position)]; }

    bool is_tightened(int position) const { return tightened_[index(position)]; }

    void set(int position, double load) {
        loads_[index(position)] = load;
        tightened_[index(position)] = true;
    }

    int tightened_count() const {
        int c = 0;
        for (bool t : tightened_)
            if (t) ++c;
        return c;
    }

    std::vector<double> tightened_values() const {
        std::vector<double> out;
        for (std::size_t i = 0; i < loads_.size(); ++i)
            if (tightened_[i]) out.push_back(loads_[i]);
        return out;
    }

private:
    static int check_size(int n) {
        if (n < 0) throw ValidationError("LoadVector size must be non-negative");
        return n;
    }

    std::size_t index(int position) const {
        if (position < 1 || position > size())
            throw ValidationError("position out of range: " + std::to_string(position));
        return static_cast<std::size_t>(position - 1);
    }

    std::vector<double> loads_;
    std::vector<bool> tightened_;
};

}  // namespace ringtight
