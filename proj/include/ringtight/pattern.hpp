#pragma once

#include <algorithm>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ringtight/errors.hpp"

namespace ringtight {

/// Shortest distance between two positions around a ring of n bolts.
inline int ring_distance(int n, int a, int b) {
    if (a < 1 || a > n || b < 1 || b > n)
        throw ValidationError("ring_distance: position out of range");
    int d = std::abs(a - b);
    return std::min(d, n - d);
}

/// Wraps an arbitrary offset position back onto 1..n.
inline int wrap_position(int position, int n) {
    int p = (position - 1) % n;
    if (p < 0) p += n;
    return p + 1;
}

/// The order in which bolts are tightened: a permutation of positions 1..n.
class TighteningPattern {
public:
    static TighteningPattern custom(std::vector<int> order) {
        return TighteningPattern(std::move(order));
    }

    const std::vector<int>& order() const { return order_; }
    int n_bolts() const { return static_cast<int>(order_.size()); }

    /// 1-based step at which `position` is tightened.
    int order_index(int position) const {
        if (position < 1 || position > n_bolts())
            throw ValidationError("order_index: unknown position " + std::to_string(position));
        return step_of_[static_cast<std::size_t>(position - 1)];
    }

    /// Position tightened at 1-based step `step`.
    int position_at(int step) const {
        if (step < 1 || step > n_bolts())
            throw ValidationError("position_at: step out of range " + std::to_string(step));
        return order_[static_cast<std::size_t>(step - 1)];
    }

    /// Relabels every position by a fixed ring rotation, keeping step order.
    TighteningPattern rotated(int offset) const {
        std::vector<int> out(order_.size());
        for (std::size_t i = 0; i < order_.size(); ++i)
            out[i] = wrap_position(order_[i] + offset, n_bolts());
        return TighteningPattern(std::move(out));
    }

private:
    explicit TighteningPattern(std::vector<int> order) : order_(std::move(order)) {
        const int n = n_bolts();
        if (n < 2) throw ValidationError("pattern must cover at least 2 bolts");
        step_of_.assign(static_cast<std::size_t>(n), 0);
        for (int k = 1; k <= n; ++k) {
            int p = order_[static_cast<std::size_t>(k - 1)];
            if (p < 1 || p > n)
                throw ValidationError("pattern order is not a permutation: position " +
                                      std::to_string(p) + " out of range");
            int& slot = step_of_[static_cast<std::size_t>(p - 1)];
            if (slot != 0)
                throw ValidationError("pattern order is not a permutation: position " +
                                      std::to_string(p) + " repeats");
            slot = k;
        }
    }

    std::vector<int> order_;
    std::vector<int> step_of_;  // step_of_[pos-1] = 1-based step
};

enum class PatternKind { pattern1, pattern2, star_circular, circular, custom };

inline std::string to_string(PatternKind kind) {
    switch (kind) {
        case PatternKind::pattern1: return "pattern1";
        case PatternKind::pattern2: return "pattern2";
        case PatternKind::star_circular: return "star_circular";
        case PatternKind::circular: return "circular";
        case PatternKind::custom: return "custom";
    }
    return "?";
}

inline PatternKind pattern_kind_from_string(const std::string& s) {
    if (s == "pattern1") return PatternKind::pattern1;
    if (s == "pattern2") return PatternKind::pattern2;
    if (s == "star_circular") return PatternKind::star_circular;
    if (s == "circular") return PatternKind::circular;
    if (s == "custom") return PatternKind::custom;
    throw ValidationError("unknown pattern kind '" + s + "'");
}

/// Builds one of the named 20-bolt layouts, a generic circular order, or a
/// caller-supplied permutation. The named layouts are defined for 20 bolts
/// only; other ring sizes go through `custom`.
inline TighteningPattern make_pattern(PatternKind kind, int n,
                                      const std::optional<std::vector<int>>& custom_order = {}) {
    if (n < 2) throw ValidationError("n_bolts below minimum");
    switch (kind) {
        case PatternKind::pattern1:
            if (n != 20) throw ValidationError("pattern1 requires 20 bolts");
            return TighteningPattern::custom(
                {1, 11, 6, 16, 3, 13, 8, 18, 5, 15, 10, 20, 2, 12, 7, 17, 4, 14, 9, 19});
        case PatternKind::pattern2:
            if (n != 20) throw ValidationError("pattern2 requires 20 bolts");
            return TighteningPattern::custom(
                {1, 11, 6, 16, 2, 12, 7, 17, 3, 13, 8, 18, 4, 14, 9, 19, 5, 15, 10, 20});
        case PatternKind::star_circular: {
            if (n != 20) throw ValidationError("star_circular requires 20 bolts");
            // Star set 1-11-6-16 first, then the remaining bolts ascending.
            std::vector<int> order = {1, 11, 6, 16};
            for (int p = 1; p <= n; ++p)
                if (p != 1 && p != 11 && p != 6 && p != 16) order.push_back(p);
            return TighteningPattern::custom(std::move(order));
        }
        case PatternKind::circular: {
            std::vector<int> order(static_cast<std::size_t>(n));
            std::iota(order.begin(), order.end(), 1);
            return TighteningPattern::custom(std::move(order));
        }
        case PatternKind::custom:
            if (!custom_order) throw ValidationError("custom pattern requires an explicit order");
            if (static_cast<int>(custom_order->size()) != n)
                throw ValidationError("custom order length does not match n_bolts");
            return TighteningPattern::custom(*custom_order);
    }
    throw ValidationError("unsupported pattern kind");
}

}  // namespace ringtight
