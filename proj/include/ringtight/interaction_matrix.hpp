#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "ringtight/errors.hpp"

namespace ringtight {

/// Unit-upper-triangular interaction matrix in tightening order: entry
/// (i, j) is the load change of the step-i bolt per unit load applied at
/// step j. `order` carries the bolt positions the rows/columns refer to.
struct InteractionMatrix {
    std::vector<int> order;                // bolt position per step
    std::vector<std::vector<double>> a;    // a[i-1][j-1]

    int size() const { return static_cast<int>(a.size()); }

    double at(int i, int j) const {
        if (i < 1 || i > size() || j < 1 || j > size())
            throw ValidationError("InteractionMatrix index out of range");
        return a[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j - 1)];
    }

    static InteractionMatrix identity(int n) {
        InteractionMatrix m;
        m.order.resize(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) m.order[static_cast<std::size_t>(i)] = i + 1;
        m.a.assign(static_cast<std::size_t>(n), std::vector<double>(static_cast<std::size_t>(n), 0.0));
        for (int i = 0; i < n; ++i) m.a[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = 1.0;
        return m;
    }
};

inline void require_unit_upper_triangular(const InteractionMatrix& m) {
    const int n = m.size();
    if (n == 0) throw ValidationError("empty interaction matrix");
    for (int i = 1; i <= n; ++i) {
        if (static_cast<int>(m.a[static_cast<std::size_t>(i - 1)].size()) != n)
            throw ValidationError("interaction matrix is not square");
        if (m.at(i, i) != 1.0)
            throw ValidationError("interaction matrix diagonal must be 1 (row " +
                                  std::to_string(i) + ")");
        for (int j = 1; j < i; ++j)
            if (m.at(i, j) != 0.0)
                throw ValidationError("interaction matrix must be upper triangular (row " +
                                      std::to_string(i) + ")");
    }
}

}  // namespace ringtight
