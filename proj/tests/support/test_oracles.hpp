#pragma once

// Test-only oracles, independent of the library's solve path: a dense
// Gaussian-elimination solver with partial pivoting, plus a tiny
// deterministic RNG for property-style tests.

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace test_support {

/// Solves M x = b by Gaussian elimination with partial pivoting.
inline std::vector<double> dense_solve(std::vector<std::vector<double>> m,
                                       std::vector<double> b) {
    const std::size_t n = m.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(m[r][col]) > std::abs(m[pivot][col])) pivot = r;
        if (m[pivot][col] == 0.0) throw std::runtime_error("dense_solve: singular matrix");
        std::swap(m[col], m[pivot]);
        std::swap(b[col], b[pivot]);
        for (std::size_t r = col + 1; r < n; ++r) {
            double f = m[r][col] / m[col][col];
            for (std::size_t c = col; c < n; ++c) m[r][c] -= f * m[col][c];
            b[r] -= f * b[col];
        }
    }
    std::vector<double> x(n, 0.0);
    for (std::size_t i = n; i-- > 0;) {
        double acc = b[i];
        for (std::size_t j = i + 1; j < n; ++j) acc -= m[i][j] * x[j];
        x[i] = acc / m[i][i];
    }
    return x;
}

/// xorshift-based generator so property tests are reproducible everywhere.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed ? seed : 1) {}

    std::uint64_t next() {
        state_ ^= state_ << 13;
        state_ ^= state_ >> 7;
        state_ ^= state_ << 17;
        return state_;
    }

    /// Uniform in [lo, hi).
    double uniform(double lo, double hi) {
        double u = static_cast<double>(next() >> 11) * 0x1.0p-53;
        return lo + u * (hi - lo);
    }

    /// Uniform integer in [lo, hi].
    int range(int lo, int hi) {
        return lo + static_cast<int>(next() % static_cast<std::uint64_t>(hi - lo + 1));
    }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i)
            std::swap(v[i - 1], v[static_cast<std::size_t>(range(0, static_cast<int>(i) - 1))]);
    }

private:
    std::uint64_t state_;
};

}  // namespace test_support
