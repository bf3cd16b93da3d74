#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ringtight/bench.hpp"
#include "ringtight/coefficients.hpp"
#include "ringtight/eicm.hpp"
#include "ringtight/errors.hpp"
#include "ringtight/model.hpp"
#include "ringtight/pattern.hpp"
#include "ringtight/plan.hpp"

namespace ringtight {

enum class CoefficientKind { alpha, beta, gamma, delta };

inline std::string to_string(CoefficientKind k) {
    switch (k) {
        case CoefficientKind::alpha: return "alpha";
        case CoefficientKind::beta: return "beta";
        case CoefficientKind::gamma: return "gamma";
        case CoefficientKind::delta: return "delta";
    }
    return "?";
}

/// The two-load-step characterization experiment: a first batch of bolts
/// tightened to `level`, then a few probe bolts whose neighborhoods realize
/// all four load cases. Influence zones of distinct probe bolts stay
/// disjoint, so the end-of-first-step reads remain valid "before" values.
struct TwoStepProtocol {
    double level = 0.0;                                   // kN, second load step
    std::vector<std::pair<int, double>> first_step;       // (position, load), in this order
    std::vector<int> second_step;                         // probe bolts, in this order
    std::map<int, std::vector<int>> measurement_plan;     // probe bolt -> bolts read after it
    struct ExtractionEntry {
        int second_bolt = 0;
        int measured_bolt = 0;
        CoefficientKind kind = CoefficientKind::alpha;
    };
    std::vector<ExtractionEntry> extraction_map;

    int tightening_count() const {
        return static_cast<int>(first_step.size() + second_step.size());
    }

    /// First-step reads + per-probe affected reads + probe applied reads.
    int measurement_count() const {
        int reads = static_cast<int>(first_step.size() + second_step.size());
        for (const auto& [bolt, plan] : measurement_plan)
            reads += static_cast<int>(plan.size());
        return reads;
    }
};

/// Lays out the two-load-step experiment. n = 20 reproduces the published
/// layout for the 24" joint; other sizes get the minimal two-anchor design
/// (anchor A realizes gamma/beta/delta, anchor B realizes alpha).
inline TwoStepProtocol design_protocol(int n, double level) {
    if (!(level > 0.0)) throw ValidationError("protocol level must be positive");
    if (n < 12) throw ValidationError("ring too small for disjoint influence zones");

    using K = CoefficientKind;
    TwoStepProtocol proto;
    proto.level = level;
    std::vector<int> first;
    if (n == 20) {
        first = {1, 4, 5, 8, 11, 15, 17, 18};
        proto.second_step = {3, 9, 16};
        proto.measurement_plan = {{3, {4, 1, 5}}, {9, {8, 11}}, {16, {15, 17, 18}}};
        proto.extraction_map = {{3, 4, K::beta},   {3, 1, K::gamma},  {3, 5, K::delta},
                                {9, 8, K::alpha},  {9, 11, K::gamma}, {16, 15, K::alpha},
                                {16, 17, K::beta}, {16, 18, K::delta}};
    } else {
        // Anchor A = 3 with {A-2, A+1, A+2} pre-tightened; anchor B = 9 with {B+1}.
        first = {1, 4, 5, 10};
        proto.second_step = {3, 9};
        proto.measurement_plan = {{3, {4, 1, 5}}, {9, {10}}};
        proto.extraction_map = {
            {3, 4, K::beta}, {3, 1, K::gamma}, {3, 5, K::delta}, {9, 10, K::alpha}};
    }
    for (int p : first) proto.first_step.emplace_back(p, level);
    return proto;
}

/// Every load the protocol plans to read, in execution order.
struct ProtocolLog {
    struct Read {
        int bolt = 0;
        int step = 0;     // tightening operations completed when read
        double load = 0.0;
    };
    struct ProbeEvent {
        int bolt = 0;
        double applied = 0.0;          // reported load of the probe bolt itself
        std::vector<Read> observed;    // affected bolts, read after the tightening
    };
    std::vector<Read> baseline;        // first-step bolts, read after the first load step
    std::vector<ProbeEvent> events;

    int measurement_count() const {
        int reads = static_cast<int>(baseline.size() + events.size());
        for (const auto& e : events) reads += static_cast<int>(e.observed.size());
        return reads;
    }
};

inline ProtocolLog execute_protocol(const JointSpec& spec, const BenchModel& model,
                                    const TwoStepProtocol& protocol) {
    validate_spec(spec);
    for (const auto& [p, load] : protocol.first_step)
        if (p < 1 || p > spec.n_bolts || !(load > 0.0))
            throw ValidationError("protocol first step invalid for this joint");
    for (int p : protocol.second_step)
        if (p < 1 || p > spec.n_bolts)
            throw ValidationError("protocol position out of range for this joint");

    BenchState state(spec, model);
    for (const auto& [p, load] : protocol.first_step) state.tighten(p, load);

    ProtocolLog log;
    for (const auto& [p, load] : protocol.first_step)
        log.baseline.push_back({p, state.steps_completed(), state.measured_load(p)});

    for (int probe : protocol.second_step) {
        state.tighten(probe, protocol.level);
        ProtocolLog::ProbeEvent event;
        event.bolt = probe;
        event.applied = state.measured_load(probe);
        auto plan = protocol.measurement_plan.find(probe);
        if (plan != protocol.measurement_plan.end())
            for (int m : plan->second)
                event.observed.push_back({m, state.steps_completed(), state.measured_load(m)});
        log.events.push_back(std::move(event));
    }
    return log;
}

/// Extraction output: per-coefficient mean across the protocol's redundant
/// estimates, plus the max-min spread and how many estimates fed each.
struct ExtractedCoefficients {
    TamCoefficients coefficients;
    TamCoefficients spread;
    std::array<int, 4> estimate_counts{0, 0, 0, 0};
};

/// Applies the load-case quotient (after - before) / applied for every
/// extraction entry and averages redundant estimates.
inline ExtractedCoefficients extract_coefficients(const ProtocolLog& log,
                                                  const TwoStepProtocol& protocol) {
    std::map<int, double> before;
    for (const auto& r : log.baseline) before[r.bolt] = r.load;

    std::array<std::vector<double>, 4> estimates;
    for (const auto& event : log.events) {
        if (event.applied == 0.0)
            throw ComputationError("extract_coefficients: zero applied load at bolt " +
                                   std::to_string(event.bolt));
        for (const auto& read : event.observed) {
            auto entry = std::find_if(protocol.extraction_map.begin(),
                                      protocol.extraction_map.end(), [&](const auto& e) {
                                          return e.second_bolt == event.bolt &&
                                                 e.measured_bolt == read.bolt;
                                      });
            if (entry == protocol.extraction_map.end()) continue;
            auto prior = before.find(read.bolt);
            if (prior == before.end())
                throw ComputationError("extract_coefficients: missing baseline read for bolt " +
                                       std::to_string(read.bolt));
            double estimate = (read.load - prior->second) / event.applied;
            estimates[static_cast<std::size_t>(entry->kind)].push_back(estimate);
            before[read.bolt] = read.load;
        }
    }

    ExtractedCoefficients out;
    double* means[4] = {&out.coefficients.alpha, &out.coefficients.beta,
                        &out.coefficients.gamma, &out.coefficients.delta};
    double* spreads[4] = {&out.spread.alpha, &out.spread.beta, &out.spread.gamma,
                          &out.spread.delta};
    for (int k = 0; k < 4; ++k) {
        const auto& v = estimates[static_cast<std::size_t>(k)];
        if (v.empty())
            throw ComputationError("extract_coefficients: no measurement for " +
                                   to_string(static_cast<CoefficientKind>(k)));
        double lo = v.front(), hi = v.front(), sum = 0.0;
        for (double x : v) {
            sum += x;
            lo = std::min(lo, x);
            hi = std::max(hi, x);
        }
        *means[k] = sum / static_cast<double>(v.size());
        *spreads[k] = hi - lo;
        out.estimate_counts[static_cast<std::size_t>(k)] = static_cast<int>(v.size());
    }
    return out;
}

/// Places the four coefficients into a full interaction matrix for the
/// given pattern. The step-i bolt is influenced by a later step-j bolt only
/// within ring distance 2; which coefficient applies depends on whether the
/// bolt beyond (distance 1) or between (distance 2) was tightened before
/// step j.
inline InteractionMatrix assemble_A(int n, const TighteningPattern& pattern,
                                    const TamCoefficients& coeffs) {
    if (n < 5) throw ValidationError("n_bolts below minimum for interaction assembly");
    if (pattern.n_bolts() != n)
        throw ValidationError("pattern size does not match n_bolts");
    require_finite(coeffs);

    InteractionMatrix m;
    m.order = pattern.order();
    m.a.assign(static_cast<std::size_t>(n), std::vector<double>(static_cast<std::size_t>(n), 0.0));
    for (int i = 1; i <= n; ++i)
        m.a[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(i - 1)] = 1.0;

    for (int j = 1; j <= n; ++j) {
        const int pj = pattern.position_at(j);
        for (int i = 1; i < j; ++i) {
            const int pi = pattern.position_at(i);
            const int dist = ring_distance(n, pi, pj);
            if (dist > 2) continue;
            const int side = wrap_position(pj + dist, n) == pi ? +1 : -1;
            double value;
            if (dist == 1) {
                int far = wrap_position(pj + 2 * side, n);
                value = pattern.order_index(far) < j ? coeffs.beta : coeffs.alpha;
            } else {
                int mid = wrap_position(pj + side, n);
                value = pattern.order_index(mid) < j ? coeffs.delta : coeffs.gamma;
            }
            m.a[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j - 1)] = value;
        }
    }
    return m;
}

/// TAM with coefficients already in hand: assemble, solve, re-simulate.
inline AssemblyPlan run_tam(const JointSpec& spec, const BenchModel& model,
                            const TighteningPattern& pattern, const TamCoefficients& coeffs) {
    validate_spec(spec);
    InteractionMatrix A = assemble_A(spec.n_bolts, pattern, coeffs);
    LoadVector si = solve_initial_loads(A, LoadVector::uniform(spec.n_bolts, spec.target_load));
    return detail::finish_plan(spec, model, pattern, si);
}

/// Full TAM: characterize the joint with the two-load-step protocol on the
/// bench, then plan. The protocol level defaults to the target load.
inline AssemblyPlan run_tam(const JointSpec& spec, const BenchModel& model,
                            const TighteningPattern& pattern,
                            std::optional<double> probe_load = {}) {
    validate_spec(spec);
    TwoStepProtocol protocol =
        design_protocol(spec.n_bolts, probe_load.value_or(spec.target_load));
    ProtocolLog log = execute_protocol(spec, model, protocol);
    ExtractedCoefficients extracted = extract_coefficients(log, protocol);
    return run_tam(spec, model, pattern, extracted.coefficients);
}

}  // namespace ringtight
