#pragma once

#include <charconv>
#include <cstdlib>
#include <sstream>
#include <string>
#include <vector>

#include "ringtight/bench.hpp"
#include "ringtight/coefficients.hpp"
#include "ringtight/errors.hpp"
#include "ringtight/interaction_matrix.hpp"
#include "ringtight/model.hpp"
#include "ringtight/plan.hpp"

namespace ringtight {

/// Shortest decimal that parses back to exactly the same double.
inline std::string format_double(double value) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, res.ptr);
}

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    for (char c : line) {
        if (c == ',') {
            cells.push_back(cell);
            cell.clear();
        } else if (c != '\r') {
            cell += c;
        }
    }
    cells.push_back(cell);
    return cells;
}

inline std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") continue;
        rows.push_back(split_csv_line(line));
    }
    return rows;
}

inline double parse_number(const std::string& cell, int line_no) {
    const char* begin = cell.c_str();
    char* end = nullptr;
    double v = std::strtod(begin, &end);
    if (end == begin || *end != '\0')
        throw ValidationError("CSV line " + std::to_string(line_no) + ": '" + cell +
                              "' is not a number");
    return v;
}

inline int parse_int(const std::string& cell, int line_no) {
    int v = 0;
    auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (res.ec != std::errc{} || res.ptr != cell.data() + cell.size())
        throw ValidationError("CSV line " + std::to_string(line_no) + ": '" + cell +
                              "' is not an integer");
    return v;
}

}  // namespace detail

/// rows = steps, columns = bolts in tightening order, header row included.
inline std::string load_history_to_csv(const LoadHistory& sh) {
    std::string out = "step";
    for (int bolt : sh.order) out += "," + std::to_string(bolt);
    out += "\n";
    for (int k = 1; k <= sh.size(); ++k) {
        out += std::to_string(k);
        for (int j = 1; j <= sh.size(); ++j) out += "," + format_double(sh.at(k, j));
        out += "\n";
    }
    return out;
}

inline LoadHistory load_history_from_csv(const std::string& text) {
    auto rows = detail::parse_csv(text);
    if (rows.size() < 2) throw ValidationError("load history CSV has no data rows");
    LoadHistory sh;
    const auto& header = rows.front();
    for (std::size_t c = 1; c < header.size(); ++c)
        sh.order.push_back(detail::parse_int(header[c], 1));
    const int n = static_cast<int>(sh.order.size());
    if (static_cast<int>(rows.size()) - 1 != n)
        throw ValidationError("load history CSV must have one row per step");
    for (int k = 1; k <= n; ++k) {
        const auto& row = rows[static_cast<std::size_t>(k)];
        if (static_cast<int>(row.size()) != n + 1)
            throw ValidationError("CSV line " + std::to_string(k + 1) + ": wrong column count");
        std::vector<double> values;
        for (int j = 1; j <= n; ++j)
            values.push_back(detail::parse_number(row[static_cast<std::size_t>(j)], k + 1));
        sh.rows.push_back(std::move(values));
    }
    return sh;
}

/// Header row and leading column carry bolt ids in tightening order.
inline std::string matrix_to_csv(const InteractionMatrix& m) {
    std::string out = "bolt";
    for (int bolt : m.order) out += "," + std::to_string(bolt);
    out += "\n";
    for (int i = 1; i <= m.size(); ++i) {
        out += std::to_string(m.order[static_cast<std::size_t>(i - 1)]);
        for (int j = 1; j <= m.size(); ++j) out += "," + format_double(m.at(i, j));
        out += "\n";
    }
    return out;
}

inline InteractionMatrix matrix_from_csv(const std::string& text) {
    auto rows = detail::parse_csv(text);
    if (rows.size() < 2) throw ValidationError("matrix CSV has no data rows");
    InteractionMatrix m;
    const auto& header = rows.front();
    for (std::size_t c = 1; c < header.size(); ++c)
        m.order.push_back(detail::parse_int(header[c], 1));
    const int n = static_cast<int>(m.order.size());
    if (static_cast<int>(rows.size()) - 1 != n)
        throw ValidationError("matrix CSV row count does not match header");
    for (int i = 1; i <= n; ++i) {
        const auto& row = rows[static_cast<std::size_t>(i)];
        if (static_cast<int>(row.size()) != n + 1)
            throw ValidationError("CSV line " + std::to_string(i + 1) + ": wrong column count");
        if (detail::parse_int(row[0], i + 1) != m.order[static_cast<std::size_t>(i - 1)])
            throw ValidationError("CSV line " + std::to_string(i + 1) +
                                  ": row label does not match header order");
        std::vector<double> values;
        for (int j = 1; j <= n; ++j)
            values.push_back(detail::parse_number(row[static_cast<std::size_t>(j)], i + 1));
        m.a.push_back(std::move(values));
    }
    return m;
}

/// Per-bolt plan rows: bolt_id, position, order, initial_kn, final_kn.
inline std::string plan_to_csv(const AssemblyPlan& plan) {
    std::string out = "bolt_id,position,order,initial_kn,final_kn\n";
    for (int p = 1; p <= plan.initial_loads.size(); ++p) {
        out += std::to_string(p) + "," + std::to_string(p) + "," +
               std::to_string(plan.pattern.order_index(p)) + "," +
               format_double(plan.initial_loads.at(p)) + "," +
               format_double(plan.predicted_final_loads.at(p)) + "\n";
    }
    return out;
}

struct PlanCsvRow {
    int bolt_id = 0;
    int position = 0;
    int order = 0;
    double initial_kn = 0.0;
    double final_kn = 0.0;
};

inline std::vector<PlanCsvRow> plan_rows_from_csv(const std::string& text) {
    auto rows = detail::parse_csv(text);
    if (rows.size() < 2) throw ValidationError("loads CSV has no data rows");
    if (rows.front() != std::vector<std::string>{"bolt_id", "position", "order", "initial_kn",
                                                 "final_kn"})
        throw ValidationError("loads CSV header must be bolt_id,position,order,initial_kn,final_kn");
    std::vector<PlanCsvRow> out;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        const int line_no = static_cast<int>(r) + 1;
        if (row.size() != 5)
            throw ValidationError("CSV line " + std::to_string(line_no) + ": wrong column count");
        PlanCsvRow parsed;
        parsed.bolt_id = detail::parse_int(row[0], line_no);
        parsed.position = detail::parse_int(row[1], line_no);
        parsed.order = detail::parse_int(row[2], line_no);
        parsed.initial_kn = detail::parse_number(row[3], line_no);
        parsed.final_kn = detail::parse_number(row[4], line_no);
        out.push_back(parsed);
    }
    return out;
}

/// Initial loads by position, from a plan/loads CSV.
inline LoadVector initial_loads_from_csv(const std::string& text, int n_bolts) {
    auto rows = plan_rows_from_csv(text);
    LoadVector loads(n_bolts);
    for (const auto& row : rows) {
        if (row.position < 1 || row.position > n_bolts)
            throw ValidationError("loads CSV position out of range: " +
                                  std::to_string(row.position));
        loads.set(row.position, row.initial_kn);
    }
    return loads;
}

inline std::string coefficients_to_csv(const TamCoefficients& c) {
    return "alpha,beta,gamma,delta\n" + format_double(c.alpha) + "," + format_double(c.beta) +
           "," + format_double(c.gamma) + "," + format_double(c.delta) + "\n";
}

inline TamCoefficients coefficients_from_csv(const std::string& text) {
    auto rows = detail::parse_csv(text);
    if (rows.size() != 2 ||
        rows.front() != std::vector<std::string>{"alpha", "beta", "gamma", "delta"} ||
        rows.back().size() != 4)
        throw ValidationError("coefficients CSV must be a header plus one row of four values");
    TamCoefficients c;
    c.alpha = detail::parse_number(rows[1][0], 2);
    c.beta = detail::parse_number(rows[1][1], 2);
    c.gamma = detail::parse_number(rows[1][2], 2);
    c.delta = detail::parse_number(rows[1][3], 2);
    return c;
}

}  // namespace ringtight
