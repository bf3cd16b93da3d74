#pragma once

#include <cmath>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ringtight/bench.hpp"
#include "ringtight/errors.hpp"
#include "ringtight/interaction_matrix.hpp"
#include "ringtight/metrics.hpp"
#include "ringtight/model.hpp"
#include "ringtight/pattern.hpp"
#include "ringtight/plan.hpp"

namespace ringtight {

/// Simulates one full sequence with uniform probe loads and returns its
/// load history.
inline LoadHistory build_sh(const JointSpec& spec, const BenchModel& model,
                            const TighteningPattern& pattern, double probe_load) {
    if (!(probe_load > 0.0)) throw ValidationError("probe_load must be positive");
    return run_sequence(spec, model, pattern,
                        LoadVector::uniform(spec.n_bolts, probe_load)).history;
}

/// Interaction coefficients from a load history: the step-j column change
/// of each earlier bolt, normalized by the step-j applied load.
inline InteractionMatrix compute_A(const LoadHistory& sh) {
    const int n = sh.size();
    if (n == 0) throw ValidationError("compute_A: empty load history");
    InteractionMatrix m;
    m.order = sh.order;
    m.a.assign(static_cast<std::size_t>(n), std::vector<double>(static_cast<std::size_t>(n), 0.0));
    for (int j = 1; j <= n; ++j) {
        if (sh.at(j, j) == 0.0)
            throw ComputationError("compute_A: zero applied load at step " + std::to_string(j));
    }
    for (int i = 1; i <= n; ++i) {
        m.a[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(i - 1)] = 1.0;
        for (int j = i + 1; j <= n; ++j) {
            m.a[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j - 1)] =
                (sh.at(j, i) - sh.at(j - 1, i)) / sh.at(j, j);
        }
    }
    return m;
}

/// Solves A * Si = Sf by back-substitution. Targets and results are indexed
/// by ring position; the matrix's `order` supplies the step mapping.
inline LoadVector solve_initial_loads(const InteractionMatrix& A, const LoadVector& target) {
    require_unit_upper_triangular(A);
    const int n = A.size();
    if (static_cast<int>(A.order.size()) != n)
        throw ValidationError("interaction matrix order labels missing");
    if (target.size() != n)
        throw ValidationError("target length does not match matrix size");

    std::vector<double> sf(static_cast<std::size_t>(n));
    for (int k = 1; k <= n; ++k)
        sf[static_cast<std::size_t>(k - 1)] = target.at(A.order[static_cast<std::size_t>(k - 1)]);

    std::vector<double> si(static_cast<std::size_t>(n), 0.0);
    for (int i = n; i >= 1; --i) {
        double acc = sf[static_cast<std::size_t>(i - 1)];
        for (int j = i + 1; j <= n; ++j)
            acc -= A.at(i, j) * si[static_cast<std::size_t>(j - 1)];
        si[static_cast<std::size_t>(i - 1)] = acc;
    }

    double max_sf = 0.0;
    for (double v : sf) max_sf = std::max(max_sf, std::abs(v));
    for (int i = 1; i <= n; ++i) {
        double resid = -sf[static_cast<std::size_t>(i - 1)];
        for (int j = i; j <= n; ++j)
            resid += A.at(i, j) * si[static_cast<std::size_t>(j - 1)];
        if (std::abs(resid) > 1e-9 * max_sf)
            throw ComputationError("solve_initial_loads: residual exceeds tolerance at step " +
                                   std::to_string(i));
    }

    LoadVector out(n);
    for (int k = 1; k <= n; ++k) {
        int bolt = A.order[static_cast<std::size_t>(k - 1)];
        double value = si[static_cast<std::size_t>(k - 1)];
        if (!(value > 0.0)) {
            std::ostringstream msg;
            msg << "infeasible target: bolt " << bolt << " would need initial load " << value
                << " kN";
            throw ComputationError(msg.str());
        }
        out.set(bolt, value);
    }
    return out;
}

namespace detail {

inline AssemblyPlan finish_plan(const JointSpec& spec, const BenchModel& model,
                                const TighteningPattern& pattern,
                                const LoadVector& initial_loads) {
    SequenceResult sim = run_sequence(spec, model, pattern, initial_loads);
    AssemblyPlan plan{pattern, initial_loads, sim.final_loads, {}};
    plan.warnings = yield_check(plan, spec);
    return plan;
}

}  // namespace detail

/// The Elastic Interaction Coefficients Method: characterize the joint with
/// one full simulated sequence, then solve for the initial loads that land
/// every bolt on the target. Probe defaults to the target load.
inline AssemblyPlan run_eicm(const JointSpec& spec, const BenchModel& model,
                             const TighteningPattern& pattern,
                             std::optional<double> probe_load = {}) {
    validate_spec(spec);
    const double probe = probe_load.value_or(spec.target_load);
    InteractionMatrix A = compute_A(build_sh(spec, model, pattern, probe));
    LoadVector si = solve_initial_loads(A, LoadVector::uniform(spec.n_bolts, spec.target_load));
    return detail::finish_plan(spec, model, pattern, si);
}

struct IterativeEicmResult {
    AssemblyPlan plan;
    int iterations = 0;              // simulate/verify passes performed
    std::vector<double> residuals;   // max relative deviation per iteration
};

/// Recalculates [A] at the working loads until the simulated finals land
/// within `tol` (relative) of the target. The first candidate comes from a
/// uniform probe at the target load; a linear joint therefore converges on
/// the first verification pass.
inline IterativeEicmResult iterative_eicm(const JointSpec& spec, const BenchModel& model,
                                          const TighteningPattern& pattern, double tol,
                                          int max_iter) {
    validate_spec(spec);
    if (!(tol > 0.0)) throw ValidationError("tol must be positive");
    if (max_iter < 1) throw ValidationError("max_iter must be at least 1");

    const LoadVector target = LoadVector::uniform(spec.n_bolts, spec.target_load);
    InteractionMatrix A = compute_A(build_sh(spec, model, pattern, spec.target_load));
    LoadVector si = solve_initial_loads(A, target);

    std::vector<double> residuals;
    for (int iter = 1; iter <= max_iter; ++iter) {
        SequenceResult sim = run_sequence(spec, model, pattern, si);
        double resid = 0.0;
        for (int p = 1; p <= spec.n_bolts; ++p)
            resid = std::max(resid, std::abs(sim.final_loads.at(p) - spec.target_load) /
                                        spec.target_load);
        residuals.push_back(resid);
        if (resid <= tol) {
            AssemblyPlan plan{pattern, si, sim.final_loads, {}};
            plan.warnings = yield_check(plan, spec);
            return IterativeEicmResult{plan, iter, residuals};
        }
        A = compute_A(sim.history);
        si = solve_initial_loads(A, target);
    }

    std::ostringstream msg;
    msg << "iterative EICM did not converge after " << max_iter << " iterations; residuals:";
    for (double r : residuals) msg << " " << r;
    throw ComputationError(msg.str());
}

}  // namespace ringtight
