#pragma once

#include <stdexcept>
#include <string>

namespace ringtight {

/// Bad input: invalid config values, broken invariants, out-of-range
/// positions. Maps to CLI exit code 1.
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A computation that cannot produce a usable result: infeasible targets,
/// singular histories, non-convergence. Maps to CLI exit code 2.
class ComputationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace ringtight
