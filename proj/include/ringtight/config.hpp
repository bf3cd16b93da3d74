#pragma once

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ringtight/bench.hpp"
#include "ringtight/csv.hpp"
#include "ringtight/errors.hpp"
#include "ringtight/model.hpp"
#include "ringtight/pattern.hpp"

namespace ringtight {

enum class Method { eicm, tam, both };
enum class OutputFormat { csv, json };

inline std::string to_string(Method m) {
    switch (m) {
        case Method::eicm: return "eicm";
        case Method::tam: return "tam";
        case Method::both: return "both";
    }
    return "?";
}

inline std::string to_string(OutputFormat f) {
    return f == OutputFormat::json ? "json" : "csv";
}

struct PatternConfig {
    PatternKind kind = PatternKind::pattern1;
    std::optional<std::vector<int>> order;  // for kind == custom
};

struct SweepConfig {
    std::vector<TamCoefficients> coefficient_sets;
    std::vector<std::string> labels;     // parallel to coefficient_sets; may be empty
    std::vector<PatternKind> patterns;
};

/// A fully resolved run: joint, bench model, pattern, method and output
/// choices, with every default filled in.
struct RunConfig {
    JointSpec joint;
    BenchModel bench;
    PatternConfig pattern;
    Method method = Method::eicm;
    bool iterative = false;
    double tol = 1e-3;
    int max_iter = 20;
    std::optional<double> probe_load;         // kN; default = target_load
    std::optional<std::string> loads_file;    // input for `simulate`
    std::string output_dir = "out";
    OutputFormat format = OutputFormat::csv;
    std::optional<SweepConfig> sweep;

    TighteningPattern make_tightening_pattern() const {
        return make_pattern(pattern.kind, joint.n_bolts, pattern.order);
    }

    /// The resolved configuration, echoed for reports.
    std::string echo() const {
        std::ostringstream out;
        out << "joint: n_bolts=" << joint.n_bolts << " target_load=" << joint.target_load
            << " kN";
        if (joint.yield_load) out << " yield_load=" << *joint.yield_load << " kN";
        out << " warn_fraction=" << joint.warn_fraction;
        if (!joint.scenario_label.empty()) out << " scenario=\"" << joint.scenario_label << "\"";
        out << "\nbench: variant="
            << (bench.variant == BenchVariant::tetraparametric ? "tetraparametric" : "kernel");
        if (bench.variant == BenchVariant::tetraparametric) {
            out << " alpha=" << bench.coeffs.alpha << " beta=" << bench.coeffs.beta
                << " gamma=" << bench.coeffs.gamma << " delta=" << bench.coeffs.delta;
        } else {
            out << " losses=[";
            for (std::size_t i = 0; i < bench.losses.size(); ++i)
                out << (i ? ", " : "") << bench.losses[i];
            out << "]";
        }
        out << " nonlinearity_exponent=" << bench.nonlinearity_exponent;
        if (bench.nonlinearity_exponent > 0.0)
            out << " reference_load=" << bench.reference_load << " kN";
        out << " noise_rel_std=" << bench.noise_rel_std << " noise_seed=" << bench.noise_seed;
        out << "\npattern: kind=" << to_string(pattern.kind);
        if (pattern.order) {
            out << " order=[";
            for (std::size_t i = 0; i < pattern.order->size(); ++i)
                out << (i ? "," : "") << (*pattern.order)[i];
            out << "]";
        }
        out << "\nrun: method=" << to_string(method) << " iterative="
            << (iterative ? "true" : "false") << " tol=" << tol << " max_iter=" << max_iter
            << " probe_load=" << probe_load.value_or(joint.target_load) << " kN";
        if (loads_file) out << " loads_file=\"" << *loads_file << "\"";
        out << "\noutput: dir=\"" << output_dir << "\" format=" << to_string(format) << "\n";
        return out.str();
    }
};

namespace detail {

struct ConfigValue {
    enum class Type { string, number, boolean, array };
    Type type = Type::number;
    std::string str;
    double num = 0.0;
    bool flag = false;
    std::vector<ConfigValue> items;
    int line = 0;
};

struct ConfigEntry {
    ConfigValue value;
    bool used = false;
};

using Section = std::map<std::string, ConfigEntry>;

inline int edit_distance(const std::string& a, const std::string& b) {
    std::vector<int> prev(b.size() + 1), cur(b.size() + 1);
    for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = static_cast<int>(j);
    for (std::size_t i = 1; i <= a.size(); ++i) {
        cur[0] = static_cast<int>(i);
        for (std::size_t j = 1; j <= b.size(); ++j) {
            int sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
            cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
        }
        std::swap(prev, cur);
    }
    return prev[b.size()];
}

inline std::string suggest(const std::string& name, const std::vector<std::string>& known) {
    std::string best;
    int best_d = 4;  // only suggest close matches
    for (const auto& k : known) {
        int d = edit_distance(name, k);
        if (d < best_d) {
            best_d = d;
            best = k;
        }
    }
    return best.empty() ? "" : " (did you mean '" + best + "'?)";
}

inline std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

inline ConfigValue parse_value(const std::string& raw, int line_no);

inline ConfigValue parse_array(const std::string& raw, int line_no) {
    ConfigValue v;
    v.type = ConfigValue::Type::array;
    v.line = line_no;
    std::string inner = trim(raw.substr(1, raw.size() - 2));
    if (inner.empty()) return v;
    int depth = 0;
    std::string item;
    bool in_string = false;
    for (char c : inner) {
        if (c == '"') in_string = !in_string;
        if (!in_string) {
            if (c == '[') ++depth;
            if (c == ']') --depth;
            if (c == ',' && depth == 0) {
                v.items.push_back(parse_value(trim(item), line_no));
                item.clear();
                continue;
            }
        }
        item += c;
    }
    if (!trim(item).empty()) v.items.push_back(parse_value(trim(item), line_no));
    return v;
}

inline ConfigValue parse_value(const std::string& raw, int line_no) {
    ConfigValue v;
    v.line = line_no;
    if (raw.empty())
        throw ValidationError("config line " + std::to_string(line_no) + ": missing value");
    if (raw.front() == '[') {
        if (raw.back() != ']')
            throw ValidationError("config line " + std::to_string(line_no) +
                                  ": unterminated array");
        return parse_array(raw, line_no);
    }
    if (raw.front() == '"') {
        if (raw.size() < 2 || raw.back() != '"')
            throw ValidationError("config line " + std::to_string(line_no) +
                                  ": unterminated string");
        v.type = ConfigValue::Type::string;
        v.str = raw.substr(1, raw.size() - 2);
        return v;
    }
    if (raw == "true" || raw == "false") {
        v.type = ConfigValue::Type::boolean;
        v.flag = raw == "true";
        return v;
    }
    const char* begin = raw.c_str();
    char* end = nullptr;
    v.num = std::strtod(begin, &end);
    if (end == begin || *end != '\0')
        throw ValidationError("config line " + std::to_string(line_no) + ": cannot parse value '" +
                              raw + "'");
    v.type = ConfigValue::Type::number;
    return v;
}

/// Section/key/value representation of the file, with line numbers.
struct RawConfig {
    std::map<std::string, Section> sections;
    std::map<std::string, int> section_lines;
};

inline RawConfig parse_raw(const std::string& text) {
    RawConfig raw;
    std::istringstream in(text);
    std::string line;
    std::string current;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::size_t hash = std::string::npos;
        bool in_string = false;
        for (std::size_t i = 0; i < line.size(); ++i) {
            if (line[i] == '"') in_string = !in_string;
            if (line[i] == '#' && !in_string) {
                hash = i;
                break;
            }
        }
        std::string stripped = trim(hash == std::string::npos ? line : line.substr(0, hash));
        if (stripped.empty()) continue;
        if (stripped.front() == '[') {
            if (stripped.back() != ']')
                throw ValidationError("config line " + std::to_string(line_no) +
                                      ": malformed section header");
            current = trim(stripped.substr(1, stripped.size() - 2));
            if (current.empty())
                throw ValidationError("config line " + std::to_string(line_no) +
                                      ": empty section name");
            raw.sections[current];
            raw.section_lines.emplace(current, line_no);
            continue;
        }
        std::size_t eq = stripped.find('=');
        if (eq == std::string::npos)
            throw ValidationError("config line " + std::to_string(line_no) +
                                  ": expected key = value");
        std::string key = trim(stripped.substr(0, eq));
        std::string value = trim(stripped.substr(eq + 1));
        if (key.empty())
            throw ValidationError("config line " + std::to_string(line_no) + ": empty key");
        if (current.empty())
            throw ValidationError("config line " + std::to_string(line_no) + ": key '" + key +
                                  "' outside any section");
        auto [it, inserted] = raw.sections[current].emplace(key, ConfigEntry{parse_value(value, line_no), false});
        if (!inserted)
            throw ValidationError("config line " + std::to_string(line_no) + ": duplicate key '" +
                                  key + "'");
    }
    return raw;
}

class SectionReader {
public:
    SectionReader(RawConfig& raw, const std::string& name, std::vector<std::string> known)
        : name_(name), known_(std::move(known)) {
        auto it = raw.sections.find(name);
        section_ = it == raw.sections.end() ? nullptr : &it->second;
    }

    bool present() const { return section_ != nullptr; }

    const ConfigValue* find(const std::string& key) {
        if (!section_) return nullptr;
        auto it = section_->find(key);
        if (it == section_->end()) return nullptr;
        it->second.used = true;
        return &it->second.value;
    }

    const ConfigValue& require(const std::string& key) {
        const ConfigValue* v = find(key);
        if (!v)
            throw ValidationError("config: [" + name_ + "] " + key + " is required");
        return *v;
    }

    double number(const ConfigValue& v) const {
        if (v.type != ConfigValue::Type::number)
            throw ValidationError("config line " + std::to_string(v.line) + ": [" + name_ +
                                  "] expected a number");
        return v.num;
    }

    int integer(const ConfigValue& v) const {
        double d = number(v);
        int i = static_cast<int>(d);
        if (static_cast<double>(i) != d)
            throw ValidationError("config line " + std::to_string(v.line) + ": [" + name_ +
                                  "] expected an integer");
        return i;
    }

    std::string text(const ConfigValue& v) const {
        if (v.type != ConfigValue::Type::string)
            throw ValidationError("config line " + std::to_string(v.line) + ": [" + name_ +
                                  "] expected a string");
        return v.str;
    }

    bool boolean(const ConfigValue& v) const {
        if (v.type != ConfigValue::Type::boolean)
            throw ValidationError("config line " + std::to_string(v.line) + ": [" + name_ +
                                  "] expected true or false");
        return v.flag;
    }

    const std::vector<ConfigValue>& array(const ConfigValue& v) const {
        if (v.type != ConfigValue::Type::array)
            throw ValidationError("config line " + std::to_string(v.line) + ": [" + name_ +
                                  "] expected an array");
        return v.items;
    }

    void check_unknown() const {
        if (!section_) return;
        for (const auto& [key, entry] : *section_) {
            if (!entry.used)
                throw ValidationError("config line " + std::to_string(entry.value.line) +
                                      ": unknown key '" + key + "' in [" + name_ + "]" +
                                      suggest(key, known_));
        }
    }

private:
    std::string name_;
    std::vector<std::string> known_;
    Section* section_;
};

}  // namespace detail

/// Parses and fully validates a config. Unknown sections and keys are
/// rejected with their line number and a closest-match suggestion.
inline RunConfig parse_config_text(const std::string& text) {
    using detail::ConfigValue;
    detail::RawConfig raw = detail::parse_raw(text);

    static const std::vector<std::string> known_sections = {"joint",  "bench", "pattern",
                                                            "run",    "output", "sweep"};
    for (const auto& [name, _] : raw.sections) {
        if (std::find(known_sections.begin(), known_sections.end(), name) ==
            known_sections.end())
            throw ValidationError("config line " + std::to_string(raw.section_lines.at(name)) +
                                  ": unknown section '" + name + "'" +
                                  detail::suggest(name, known_sections));
    }

    RunConfig cfg;

    detail::SectionReader joint(raw, "joint",
                                {"n_bolts", "target_load", "unit", "yield_load", "warn_fraction",
                                 "scenario"});
    if (!joint.present()) throw ValidationError("config: [joint] section is required");
    ForceUnit unit = ForceUnit::kilonewton;
    if (const auto* v = joint.find("unit")) {
        std::string u = joint.text(*v);
        if (u == "kN") unit = ForceUnit::kilonewton;
        else if (u == "N") unit = ForceUnit::newton;
        else
            throw ValidationError("config line " + std::to_string(v->line) +
                                  ": unit must be \"kN\" or \"N\"");
    }
    cfg.joint.n_bolts = joint.integer(joint.require("n_bolts"));
    cfg.joint.target_load = to_kilonewtons(joint.number(joint.require("target_load")), unit);
    if (const auto* v = joint.find("yield_load"))
        cfg.joint.yield_load = to_kilonewtons(joint.number(*v), unit);
    if (const auto* v = joint.find("warn_fraction")) cfg.joint.warn_fraction = joint.number(*v);
    if (const auto* v = joint.find("scenario")) cfg.joint.scenario_label = joint.text(*v);
    joint.check_unknown();
    validate_spec(cfg.joint);

    detail::SectionReader bench(raw, "bench",
                                {"variant", "alpha", "beta", "gamma", "delta", "losses",
                                 "nonlinearity_exponent", "reference_load", "noise",
                                 "noise_rel_std", "noise_seed"});
    if (!bench.present()) throw ValidationError("config: [bench] section is required");
    std::string variant = "tetraparametric";
    if (const auto* v = bench.find("variant")) variant = bench.text(*v);
    if (variant == "tetraparametric") {
        cfg.bench.variant = BenchVariant::tetraparametric;
        cfg.bench.coeffs.alpha = bench.number(bench.require("alpha"));
        cfg.bench.coeffs.beta = bench.number(bench.require("beta"));
        cfg.bench.coeffs.gamma = bench.number(bench.require("gamma"));
        cfg.bench.coeffs.delta = bench.number(bench.require("delta"));
    } else if (variant == "kernel") {
        cfg.bench.variant = BenchVariant::kernel;
        for (const auto& item : bench.array(bench.require("losses")))
            cfg.bench.losses.push_back(bench.number(item));
    } else {
        throw ValidationError("config: bench variant must be \"tetraparametric\" or \"kernel\"");
    }
    if (const auto* v = bench.find("nonlinearity_exponent"))
        cfg.bench.nonlinearity_exponent = bench.number(*v);
    if (const auto* v = bench.find("reference_load"))
        cfg.bench.reference_load = to_kilonewtons(bench.number(*v), unit);
    bool noise_enabled = false;
    if (const auto* v = bench.find("noise")) noise_enabled = bench.boolean(*v);
    if (const auto* v = bench.find("noise_rel_std")) {
        cfg.bench.noise_rel_std = bench.number(*v);
    } else if (noise_enabled) {
        cfg.bench.noise_rel_std = 0.01;  // instrument default: 1% relative std
    }
    if (const auto* v = bench.find("noise_seed"))
        cfg.bench.noise_seed = static_cast<std::uint64_t>(bench.integer(*v));
    bench.check_unknown();
    validate_model(cfg.bench, cfg.joint.n_bolts);

    detail::SectionReader pattern(raw, "pattern", {"kind", "order"});
    if (!pattern.present()) throw ValidationError("config: [pattern] section is required");
    cfg.pattern.kind = pattern_kind_from_string(pattern.text(pattern.require("kind")));
    if (const auto* v = pattern.find("order")) {
        std::vector<int> order;
        for (const auto& item : pattern.array(*v)) order.push_back(pattern.integer(item));
        cfg.pattern.order = std::move(order);
    }
    pattern.check_unknown();
    if (cfg.pattern.order && cfg.pattern.kind != PatternKind::custom)
        throw ValidationError("config: pattern order is only valid with kind = \"custom\"");
    cfg.make_tightening_pattern();  // rejects invalid (kind, n, order) combinations

    detail::SectionReader run(raw, "run",
                              {"method", "iterative", "tol", "max_iter", "probe_load",
                               "loads_file"});
    if (run.present()) {
        if (const auto* v = run.find("method")) {
            std::string m = run.text(*v);
            if (m == "eicm") cfg.method = Method::eicm;
            else if (m == "tam") cfg.method = Method::tam;
            else if (m == "both") cfg.method = Method::both;
            else
                throw ValidationError("config line " + std::to_string(v->line) +
                                      ": method must be \"eicm\", \"tam\" or \"both\"");
        }
        if (const auto* v = run.find("iterative")) cfg.iterative = run.boolean(*v);
        if (const auto* v = run.find("tol")) cfg.tol = run.number(*v);
        if (const auto* v = run.find("max_iter")) cfg.max_iter = run.integer(*v);
        if (const auto* v = run.find("probe_load"))
            cfg.probe_load = to_kilonewtons(run.number(*v), unit);
        if (const auto* v = run.find("loads_file")) cfg.loads_file = run.text(*v);
        run.check_unknown();
    }
    if (cfg.iterative && !(cfg.tol > 0.0)) throw ValidationError("config: tol must be positive");
    if (cfg.iterative && cfg.max_iter < 1)
        throw ValidationError("config: max_iter must be at least 1");
    if (cfg.probe_load && !(*cfg.probe_load > 0.0))
        throw ValidationError("config: probe_load must be positive");

    detail::SectionReader output(raw, "output", {"dir", "format"});
    if (output.present()) {
        if (const auto* v = output.find("dir")) cfg.output_dir = output.text(*v);
        if (const auto* v = output.find("format")) {
            std::string f = output.text(*v);
            if (f == "csv") cfg.format = OutputFormat::csv;
            else if (f == "json") cfg.format = OutputFormat::json;
            else
                throw ValidationError("config line " + std::to_string(v->line) +
                                      ": format must be \"csv\" or \"json\"");
        }
        output.check_unknown();
    }

    detail::SectionReader sweep(raw, "sweep", {"coefficients", "patterns", "labels"});
    if (sweep.present()) {
        SweepConfig sc;
        for (const auto& set : sweep.array(sweep.require("coefficients"))) {
            const auto& values = sweep.array(set);
            if (values.size() != 4)
                throw ValidationError("config line " + std::to_string(set.line) +
                                      ": each coefficient set needs exactly 4 values");
            TamCoefficients c;
            c.alpha = sweep.number(values[0]);
            c.beta = sweep.number(values[1]);
            c.gamma = sweep.number(values[2]);
            c.delta = sweep.number(values[3]);
            sc.coefficient_sets.push_back(c);
        }
        for (const auto& item : sweep.array(sweep.require("patterns"))) {
            PatternKind kind = pattern_kind_from_string(sweep.text(item));
            if (kind == PatternKind::custom)
                throw ValidationError("config line " + std::to_string(item.line) +
                                      ": sweep patterns must be named kinds");
            make_pattern(kind, cfg.joint.n_bolts);
            sc.patterns.push_back(kind);
        }
        if (const auto* v = sweep.find("labels")) {
            for (const auto& item : sweep.array(*v)) sc.labels.push_back(sweep.text(item));
            if (sc.labels.size() != sc.coefficient_sets.size())
                throw ValidationError("config: sweep labels must match coefficient sets");
        }
        sweep.check_unknown();
        if (sc.coefficient_sets.empty() || sc.patterns.empty())
            throw ValidationError("config: sweep needs at least one coefficient set and pattern");
        cfg.sweep = std::move(sc);
    }

    return cfg;
}

inline RunConfig parse_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open config file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config_text(buffer.str());
}

}  // namespace ringtight
