#pragma once

#include <cmath>

#include "ringtight/errors.hpp"

namespace ringtight {

/// The four interaction parameters of a ring joint. alpha/beta act on the
/// neighbor at ring distance 1, gamma/delta on the neighbor at distance 2;
/// the second of each pair applies when the other bolt of the local trio
/// was already tightened. Signs are not constrained (delta can be a gain).
struct TamCoefficients {
    double alpha = 0.0;
    double beta = 0.0;
    double gamma = 0.0;
    double delta = 0.0;
};

inline void require_finite(const TamCoefficients& c) {
    if (!(std::isfinite(c.alpha) && std::isfinite(c.beta) &&
          std::isfinite(c.gamma) && std::isfinite(c.delta)))
        throw ValidationError("interaction coefficients must be finite");
}

}  // namespace ringtight
