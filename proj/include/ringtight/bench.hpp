#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "ringtight/coefficients.hpp"
#include "ringtight/errors.hpp"
#include "ringtight/model.hpp"
#include "ringtight/pattern.hpp"

namespace ringtight {

enum class BenchVariant { tetraparametric, kernel };

/// Parameters of the virtual test bench. The tetraparametric variant loses
/// load in the four classic neighbor cases; the kernel variant applies a
/// per-distance loss k(d) out to range R, which for R >= 3 escapes the
/// four-coefficient family on purpose. nonlinearity_exponent > 0 scales
/// every loss with the affected bolt's current load; noise_rel_std > 0
/// perturbs reported (never stored) loads.
struct BenchModel {
    BenchVariant variant = BenchVariant::tetraparametric;
    TamCoefficients coeffs;             // tetraparametric
    std::vector<double> losses;         // kernel: k(1)..k(R)
    double nonlinearity_exponent = 0.0; // q; 0 = linear
    double reference_load = 0.0;        // kN, required when q > 0
    double noise_rel_std = 0.0;         // relative std of reported loads
    std::uint64_t noise_seed = 0;

    static BenchModel tetraparametric(TamCoefficients c) {
        BenchModel m;
        m.coeffs = c;
        return m;
    }

    static BenchModel kernel(std::vector<double> k) {
        BenchModel m;
        m.variant = BenchVariant::kernel;
        m.losses = std::move(k);
        return m;
    }
};

inline void validate_model(const BenchModel& model, int n_bolts) {
    if (model.variant == BenchVariant::tetraparametric) {
        require_finite(model.coeffs);
    } else {
        if (model.losses.empty())
            throw ValidationError("kernel model requires at least one loss coefficient");
        if (static_cast<int>(model.losses.size()) > n_bolts / 2)
            throw ValidationError("kernel range exceeds floor(n_bolts/2)");
    }
    if (model.nonlinearity_exponent < 0.0)
        throw ValidationError("nonlinearity_exponent must be non-negative");
    if (model.nonlinearity_exponent > 0.0 && !(model.reference_load > 0.0))
        throw ValidationError("reference_load required when nonlinearity_exponent > 0");
    if (model.noise_rel_std < 0.0)
        throw ValidationError("noise_rel_std must be non-negative");
}

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Deterministic standard-normal draw keyed on (seed, step, bolt); the same
/// key always reads the same value, on any platform.
inline double gaussian_at(std::uint64_t seed, int step, int bolt) {
    std::uint64_t h = splitmix64(seed);
    h = splitmix64(h ^ static_cast<std::uint64_t>(step));
    h = splitmix64(h ^ (static_cast<std::uint64_t>(bolt) << 32));
    std::uint64_t h2 = splitmix64(h);
    // (0,1] and [0,1) uniforms from the top 53 bits
    double u1 = static_cast<double>((h >> 11) + 1) * 0x1.0p-53;
    double u2 = static_cast<double>(h2 >> 11) * 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.141592653589793238462643 * u2);
}

}  // namespace detail

/// One tightening operation as logged by the bench.
struct TightenEvent {
    int step = 0;
    int position = 0;
    double applied = 0.0;
    std::vector<std::pair<int, double>> deltas;  // (affected position, load change)
};

/// The [S_h] table: row k holds every bolt's load immediately after the
/// k-th tightening; columns are ordered by tightening step and labeled with
/// bolt positions.
struct LoadHistory {
    std::vector<int> order;                  // bolt position tightened at each step
    std::vector<std::vector<double>> rows;   // rows[k-1][j-1], kN

    int size() const { return static_cast<int>(order.size()); }

    double at(int step, int order_index) const {
        if (step < 1 || step > size() || order_index < 1 || order_index > size())
            throw ValidationError("LoadHistory index out of range");
        return rows[static_cast<std::size_t>(step - 1)][static_cast<std::size_t>(order_index - 1)];
    }
};

/// Mutable simulator state for one assembly. Tightening is setpoint-style:
/// the wrench brings the bolt TO the load. Losses are then applied to the
/// previously tightened neighbors, each side of the ring processed
/// independently (+1 first) and summed.
class BenchState {
public:
    BenchState(JointSpec spec, BenchModel model)
        : spec_(validate_spec(spec)), model_(std::move(model)), loads_(spec_.n_bolts) {
        validate_model(model_, spec_.n_bolts);
    }

    const JointSpec& spec() const { return spec_; }
    const BenchModel& model() const { return model_; }
    int steps_completed() const { return static_cast<int>(history_.size()); }
    const std::vector<TightenEvent>& history() const { return history_; }

    /// Stored physics, no measurement noise.
    double true_load(int position) const { return loads_.at(position); }
    bool is_tightened(int position) const { return loads_.is_tightened(position); }

    /// What the measurement instrument reports at the current step.
    double measured_load(int position) const {
        double value = loads_.at(position);
        if (model_.noise_rel_std <= 0.0) return value;
        double z = detail::gaussian_at(model_.noise_seed, steps_completed(), position);
        return value * (1.0 + model_.noise_rel_std * z);
    }

    LoadVector measured_loads() const {
        LoadVector out(spec_.n_bolts);
        for (int p = 1; p <= spec_.n_bolts; ++p)
            if (loads_.is_tightened(p)) out.set(p, measured_load(p));
        return out;
    }

    void tighten(int position, double load) {
        const int n = spec_.n_bolts;
        if (position < 1 || position > n)
            throw ValidationError("tighten: position out of range " + std::to_string(position));
        if (!(load > 0.0))
            throw ValidationError("tighten: load must be positive");

        // "Previously tightened" means strictly before this call.
        std::vector<bool> prev(static_cast<std::size_t>(n));
        for (int p = 1; p <= n; ++p) prev[static_cast<std::size_t>(p - 1)] = loads_.is_tightened(p);
        auto was_tight = [&](int p) { return prev[static_cast<std::size_t>(p - 1)]; };

        TightenEvent event;
        event.step = steps_completed() + 1;
        event.position = position;
        event.applied = load;

        loads_.set(position, load);

        auto apply_delta = [&](int p, double coeff) {
            double delta = coeff * load * scale_factor(p);
            loads_.set(p, loads_.at(p) + delta);
            event.deltas.emplace_back(p, delta);
        };

        for (int s : {+1, -1}) {
            if (model_.variant == BenchVariant::tetraparametric) {
                int n1 = wrap_position(position + s, n);
                int n2 = wrap_position(position + 2 * s, n);
                bool n1_prev = n1 != position && was_tight(n1);
                bool n2_prev = n2 != position && was_tight(n2);
                if (n1_prev)
                    apply_delta(n1, n2_prev ? model_.coeffs.beta : model_.coeffs.alpha);
                if (n2_prev)
                    apply_delta(n2, n1_prev ? model_.coeffs.delta : model_.coeffs.gamma);
            } else {
                for (int d = 1; d <= static_cast<int>(model_.losses.size()); ++d) {
                    int nb = wrap_position(position + s * d, n);
                    if (nb == position || !was_tight(nb)) continue;
                    apply_delta(nb, model_.losses[static_cast<std::size_t>(d - 1)]);
                }
            }
        }
        history_.push_back(std::move(event));
    }

private:
    double scale_factor(int position) const {
        if (model_.nonlinearity_exponent == 0.0) return 1.0;
        return std::pow(loads_.at(position) / model_.reference_load,
                        model_.nonlinearity_exponent);
    }

    JointSpec spec_;
    BenchModel model_;
    LoadVector loads_;
    std::vector<TightenEvent> history_;
};

struct SequenceResult {
    LoadHistory history;
    LoadVector final_loads;
};

/// Tightens every bolt of the pattern once, in order, with its load from
/// `initial_loads`, recording the reported load state after each step.
inline SequenceResult run_sequence(const JointSpec& spec, const BenchModel& model,
                                   const TighteningPattern& pattern,
                                   const LoadVector& initial_loads) {
    if (pattern.n_bolts() != spec.n_bolts)
        throw ValidationError("pattern size does not match n_bolts");
    if (initial_loads.size() != spec.n_bolts)
        throw ValidationError("initial loads size does not match n_bolts");
    for (int p : pattern.order())
        if (!initial_loads.is_tightened(p) || !(initial_loads.at(p) > 0.0))
            throw ValidationError("initial load missing or non-positive for position " +
                                  std::to_string(p));

    const int n = spec.n_bolts;
    BenchState state(spec, model);
    LoadHistory sh;
    sh.order = pattern.order();
    sh.rows.assign(static_cast<std::size_t>(n), std::vector<double>(static_cast<std::size_t>(n), 0.0));

    for (int step = 1; step <= n; ++step) {
        int position = pattern.position_at(step);
        state.tighten(position, initial_loads.at(position));
        for (int j = 1; j <= step; ++j) {
            int bolt = sh.order[static_cast<std::size_t>(j - 1)];
            sh.rows[static_cast<std::size_t>(step - 1)][static_cast<std::size_t>(j - 1)] =
                state.measured_load(bolt);
        }
    }
    return SequenceResult{std::move(sh), state.measured_loads()};
}

}  // namespace ringtight
