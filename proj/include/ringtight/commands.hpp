#pragma once

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "ringtight/config.hpp"
#include "ringtight/csv.hpp"
#include "ringtight/eicm.hpp"
#include "ringtight/errors.hpp"
#include "ringtight/metrics.hpp"
#include "ringtight/tam.hpp"

namespace ringtight {

enum class Command { coefficients, matrix, optimize, simulate, validate, sweep };

inline Command command_from_string(const std::string& s) {
    if (s == "coefficients") return Command::coefficients;
    if (s == "matrix") return Command::matrix;
    if (s == "optimize") return Command::optimize;
    if (s == "simulate") return Command::simulate;
    if (s == "validate") return Command::validate;
    if (s == "sweep") return Command::sweep;
    throw ValidationError("unknown command '" + s + "'");
}

struct CommandOutcome {
    std::string report;                      // text or JSON, per output.format
    std::vector<std::string> files_written;  // paths of emitted files
    nlohmann::ordered_json summary;          // structured result, always built
};

namespace detail {

/// Human-readable loads round to 1 decimal kN; files keep full precision.
inline std::string kn1(double v) {
    std::ostringstream out;
    out << std::fixed << std::setprecision(1) << v;
    return out.str();
}

inline std::string coeff(double v) {
    std::ostringstream out;
    out << std::setprecision(6) << v;
    return out.str();
}

class OutputWriter {
public:
    explicit OutputWriter(const RunConfig& cfg) : dir_(cfg.output_dir) {}

    std::string write(const std::string& name, const std::string& content) {
        std::filesystem::create_directories(dir_);
        std::filesystem::path path = std::filesystem::path(dir_) / name;
        std::ofstream out(path, std::ios::binary);
        if (!out) throw ComputationError("cannot write output file: " + path.string());
        out << content;
        files.push_back(path.string());
        return path.string();
    }

    std::vector<std::string> files;

private:
    std::string dir_;
};

inline nlohmann::ordered_json stats_json(const LoadStats& s) {
    return {{"mean_kn", s.mean}, {"std_kn", s.std}, {"min_kn", s.min}, {"max_kn", s.max}};
}

inline double max_rel_deviation(const LoadVector& loads, double target) {
    double worst = 0.0;
    for (int p = 1; p <= loads.size(); ++p)
        if (loads.is_tightened(p))
            worst = std::max(worst, std::abs(loads.at(p) - target) / target);
    return worst;
}

inline AssemblyPlan plan_for(Method method, const RunConfig& cfg,
                             const TighteningPattern& pattern, int* iterations = nullptr) {
    if (method == Method::tam)
        return run_tam(cfg.joint, cfg.bench, pattern, cfg.probe_load);
    if (cfg.iterative) {
        IterativeEicmResult res =
            iterative_eicm(cfg.joint, cfg.bench, pattern, cfg.tol, cfg.max_iter);
        if (iterations) *iterations = res.iterations;
        return res.plan;
    }
    return run_eicm(cfg.joint, cfg.bench, pattern, cfg.probe_load);
}

inline std::vector<Method> methods_of(const RunConfig& cfg) {
    if (cfg.method == Method::both) return {Method::eicm, Method::tam};
    return {cfg.method};
}

inline void describe_plan(std::ostringstream& text, nlohmann::ordered_json& entry,
                          const std::string& label, const AssemblyPlan& plan,
                          const RunConfig& cfg) {
    LoadStats si = load_stats(plan.initial_loads);
    LoadStats sf = load_stats(plan.predicted_final_loads);
    double dev = max_rel_deviation(plan.predicted_final_loads, cfg.joint.target_load);
    text << label << ": initial " << kn1(si.min) << ".." << kn1(si.max) << " kN, predicted final "
         << kn1(sf.mean) << " +/- " << kn1(sf.std) << " kN, max deviation "
         << coeff(dev * 100.0) << "%\n";
    for (const std::string& w : plan.warnings) text << "  warning: " << w << "\n";
    entry["initial"] = stats_json(si);
    entry["final"] = stats_json(sf);
    entry["max_rel_deviation"] = dev;
    entry["warnings"] = plan.warnings;
}

inline ExtractedCoefficients characterize(const RunConfig& cfg) {
    TwoStepProtocol protocol = design_protocol(
        cfg.joint.n_bolts, cfg.probe_load.value_or(cfg.joint.target_load));
    ProtocolLog log = execute_protocol(cfg.joint, cfg.bench, protocol);
    return extract_coefficients(log, protocol);
}

}  // namespace detail

inline CommandOutcome run_command(Command command, const RunConfig& cfg) {
    using nlohmann::ordered_json;
    detail::OutputWriter writer(cfg);
    std::ostringstream text;
    ordered_json summary;
    summary["command"] = "";
    summary["scenario"] = cfg.joint.scenario_label;

    switch (command) {
        case Command::coefficients: {
            summary["command"] = "coefficients";
            TwoStepProtocol protocol = design_protocol(
                cfg.joint.n_bolts, cfg.probe_load.value_or(cfg.joint.target_load));
            ProtocolLog log = execute_protocol(cfg.joint, cfg.bench, protocol);
            ExtractedCoefficients ext = extract_coefficients(log, protocol);
            writer.write("coefficients.csv", coefficients_to_csv(ext.coefficients));

            text << "coefficients (two-load-step protocol)\n" << cfg.echo();
            text << "protocol cost: " << protocol.tightening_count()
                 << " tightening operations, " << protocol.measurement_count()
                 << " load measurements\n";
            const char* names[4] = {"alpha", "beta", "gamma", "delta"};
            double means[4] = {ext.coefficients.alpha, ext.coefficients.beta,
                               ext.coefficients.gamma, ext.coefficients.delta};
            double spreads[4] = {ext.spread.alpha, ext.spread.beta, ext.spread.gamma,
                                 ext.spread.delta};
            for (int k = 0; k < 4; ++k) {
                text << names[k] << " = " << detail::coeff(means[k]) << " (spread "
                     << detail::coeff(spreads[k]) << ", " << ext.estimate_counts[static_cast<std::size_t>(k)]
                     << " estimates)\n";
                summary["coefficients"][names[k]] = means[k];
                summary["spread"][names[k]] = spreads[k];
                summary["estimates"][names[k]] = ext.estimate_counts[static_cast<std::size_t>(k)];
            }
            summary["protocol"] = {{"tightening_operations", protocol.tightening_count()},
                                   {"load_measurements", protocol.measurement_count()}};
            break;
        }

        case Command::matrix: {
            summary["command"] = "matrix";
            TighteningPattern pattern = cfg.make_tightening_pattern();
            text << "interaction matrix\n" << cfg.echo();
            std::optional<InteractionMatrix> a_eicm, a_tam;
            for (Method m : detail::methods_of(cfg)) {
                if (m == Method::eicm) {
                    a_eicm = compute_A(build_sh(cfg.joint, cfg.bench, pattern,
                                                cfg.probe_load.value_or(cfg.joint.target_load)));
                    writer.write("matrix_eicm.csv", matrix_to_csv(*a_eicm));
                } else {
                    ExtractedCoefficients ext = detail::characterize(cfg);
                    a_tam = assemble_A(cfg.joint.n_bolts, pattern, ext.coefficients);
                    writer.write("matrix_tam.csv", matrix_to_csv(*a_tam));
                }
            }
            summary["n_bolts"] = cfg.joint.n_bolts;
            if (a_eicm && a_tam) {
                double diff = matrix_max_abs_diff(*a_eicm, *a_tam);
                text << "max |A_eicm - A_tam| = " << detail::coeff(diff) << "\n";
                summary["max_abs_diff"] = diff;
            }
            break;
        }

        case Command::optimize: {
            summary["command"] = "optimize";
            TighteningPattern pattern = cfg.make_tightening_pattern();
            text << "tightening plan\n" << cfg.echo();
            summary["plans"] = ordered_json::object();
            for (Method m : detail::methods_of(cfg)) {
                int iterations = 0;
                AssemblyPlan plan = detail::plan_for(m, cfg, pattern, &iterations);
                std::string name = to_string(m);
                writer.write("plan_" + name + ".csv", plan_to_csv(plan));
                ordered_json entry;
                detail::describe_plan(text, entry, name, plan, cfg);
                if (m == Method::eicm && cfg.iterative) {
                    entry["iterations"] = iterations;
                    text << "  converged in " << iterations << " iteration(s)\n";
                }
                text << "  bolt loads (kN):";
                for (int step = 1; step <= cfg.joint.n_bolts; ++step) {
                    int p = pattern.position_at(step);
                    text << " " << p << ":" << detail::kn1(plan.initial_loads.at(p));
                }
                text << "\n";
                summary["plans"][name] = entry;
            }
            break;
        }

        case Command::simulate: {
            summary["command"] = "simulate";
            if (!cfg.loads_file)
                throw ValidationError("simulate requires run.loads_file (or --loads)");
            std::ifstream in(*cfg.loads_file);
            if (!in) throw ValidationError("cannot open loads file: " + *cfg.loads_file);
            std::ostringstream buf;
            buf << in.rdbuf();
            LoadVector initial = initial_loads_from_csv(buf.str(), cfg.joint.n_bolts);
            TighteningPattern pattern = cfg.make_tightening_pattern();
            SequenceResult res = run_sequence(cfg.joint, cfg.bench, pattern, initial);
            AssemblyPlan as_plan{pattern, initial, res.final_loads, {}};
            writer.write("finals.csv", plan_to_csv(as_plan));
            writer.write("history.csv", load_history_to_csv(res.history));
            LoadStats sf = load_stats(res.final_loads);
            double dev = detail::max_rel_deviation(res.final_loads, cfg.joint.target_load);
            text << "simulated sequence\n" << cfg.echo();
            text << "final " << detail::kn1(sf.mean) << " +/- " << detail::kn1(sf.std)
                 << " kN (min " << detail::kn1(sf.min) << ", max " << detail::kn1(sf.max)
                 << "), max deviation from target " << detail::coeff(dev * 100.0) << "%\n";
            summary["final"] = detail::stats_json(sf);
            summary["max_rel_deviation"] = dev;
            break;
        }

        case Command::validate: {
            summary["command"] = "validate";
            TighteningPattern pattern = cfg.make_tightening_pattern();
            text << "validate: optimize then re-simulate\n" << cfg.echo();
            summary["plans"] = ordered_json::object();
            for (Method m : detail::methods_of(cfg)) {
                AssemblyPlan plan = detail::plan_for(m, cfg, pattern);
                std::string name = to_string(m);
                writer.write("plan_" + name + ".csv", plan_to_csv(plan));
                SequenceResult res = run_sequence(cfg.joint, cfg.bench, pattern,
                                                  plan.initial_loads);
                LoadStats sf = load_stats(res.final_loads);
                double dev = detail::max_rel_deviation(res.final_loads, cfg.joint.target_load);
                double rel_std = sf.std / sf.mean;
                double err = avg_relative_error(
                    res.final_loads,
                    LoadVector::uniform(cfg.joint.n_bolts, cfg.joint.target_load));
                text << name << ": final mean " << detail::kn1(sf.mean) << " kN, std "
                     << detail::coeff(sf.std) << " kN (relative " << detail::coeff(rel_std)
                     << "), avg relative error " << detail::coeff(err) << ", max deviation "
                     << detail::coeff(dev * 100.0) << "%\n";
                for (const std::string& w : plan.warnings) text << "  warning: " << w << "\n";
                ordered_json entry;
                entry["final"] = detail::stats_json(sf);
                entry["relative_std"] = rel_std;
                entry["avg_relative_error"] = err;
                entry["max_rel_deviation"] = dev;
                entry["warnings"] = plan.warnings;
                summary["plans"][name] = entry;
            }
            break;
        }

        case Command::sweep: {
            summary["command"] = "sweep";
            if (!cfg.sweep) throw ValidationError("sweep requires a [sweep] section");
            text << "scenario sweep\n" << cfg.echo();
            std::string csv =
                "label,pattern,method,alpha,beta,gamma,delta,final_mean_kn,final_std_kn,"
                "initial_min_kn,initial_max_kn,max_rel_deviation,warnings\n";
            summary["rows"] = ordered_json::array();
            const SweepConfig& sw = *cfg.sweep;
            for (std::size_t ci = 0; ci < sw.coefficient_sets.size(); ++ci) {
                const TamCoefficients& coeffs = sw.coefficient_sets[ci];
                std::string label =
                    ci < sw.labels.size() ? sw.labels[ci] : "set" + std::to_string(ci + 1);
                for (PatternKind kind : sw.patterns) {
                    TighteningPattern pattern = make_pattern(kind, cfg.joint.n_bolts);
                    RunConfig scenario = cfg;
                    scenario.bench.variant = BenchVariant::tetraparametric;
                    scenario.bench.coeffs = coeffs;
                    scenario.bench.losses.clear();
                    for (Method m : detail::methods_of(cfg)) {
                        AssemblyPlan plan = detail::plan_for(m, scenario, pattern);
                        LoadStats si = load_stats(plan.initial_loads);
                        LoadStats sf = load_stats(plan.predicted_final_loads);
                        double dev = detail::max_rel_deviation(plan.predicted_final_loads,
                                                               cfg.joint.target_load);
                        csv += label + "," + to_string(kind) + "," + to_string(m) + "," +
                               format_double(coeffs.alpha) + "," + format_double(coeffs.beta) +
                               "," + format_double(coeffs.gamma) + "," +
                               format_double(coeffs.delta) + "," + format_double(sf.mean) + "," +
                               format_double(sf.std) + "," + format_double(si.min) + "," +
                               format_double(si.max) + "," + format_double(dev) + "," +
                               std::to_string(plan.warnings.size()) + "\n";
                        text << label << " " << to_string(kind) << " " << to_string(m)
                             << ": final " << detail::kn1(sf.mean) << " +/- "
                             << detail::coeff(sf.std) << " kN, initial up to "
                             << detail::kn1(si.max) << " kN, " << plan.warnings.size()
                             << " warning(s)\n";
                        summary["rows"].push_back(
                            {{"label", label},
                             {"pattern", to_string(kind)},
                             {"method", to_string(m)},
                             {"final", detail::stats_json(sf)},
                             {"initial", detail::stats_json(si)},
                             {"max_rel_deviation", dev},
                             {"warnings", plan.warnings.size()}});
                    }
                }
            }
            writer.write("sweep.csv", csv);
            break;
        }
    }

    CommandOutcome outcome;
    outcome.summary = std::move(summary);
    outcome.files_written = writer.files;
    if (cfg.format == OutputFormat::json) {
        outcome.summary["files"] = outcome.files_written;
        outcome.report = outcome.summary.dump(2) + "\n";
        writer.write("report.json", outcome.report);
    } else {
        for (const std::string& f : writer.files) text << "wrote " << f << "\n";
        outcome.report = text.str();
        writer.write("report.txt", outcome.report);
    }
    outcome.files_written = writer.files;
    return outcome;
}

}  // namespace ringtight
