#pragma once

// File formats: JSON instances, CSV schedule tables, JSON solve results and
// CSV convergence traces. Writes go through a temporary file and a rename.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include <nlohmann/json.hpp>

#include "scnet/errors.hpp"
#include "scnet/network_model.hpp"
#include "scnet/nsga2.hpp"
#include "scnet/scenario_lab.hpp"

namespace scnet {

using json = nlohmann::json;

// ---------------------------------------------------------------------------
// Files

inline std::string read_file(std::filesystem::path const& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) { throw IoError("cannot open " + path.string()); }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

inline void write_file_atomic(std::filesystem::path const& path, std::string_view contents)
{
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) { throw IoError("cannot write " + path.string()); }
        out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
        if (!out.flush()) { throw IoError("write failed for " + path.string()); }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw IoError("cannot replace " + path.string());
    }
}

// ---------------------------------------------------------------------------
// Instances

// Every problem found in one instance document, each prefixed with the line
// where the offending key first appears.
class InstanceError : public FormatError {
public:
    explicit InstanceError(std::vector<std::string> problems)
        : FormatError(join(problems)), problems_(std::move(problems)) {}

    [[nodiscard]] std::vector<std::string> const& problems() const noexcept { return problems_; }

private:
    static std::string join(std::vector<std::string> const& v)
    {
        std::string s;
        for (auto const& p : v) { s += (s.empty() ? "" : "\n") + p; }
        return s;
    }
    std::vector<std::string> problems_;
};

namespace detail {

    inline std::size_t line_of_offset(std::string_view text, std::size_t offset)
    {
        offset = std::min(offset, text.size());
        return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(offset), '\n'));
    }

    inline std::string locate(std::string_view text, std::string_view field)
    {
        auto const key = field.substr(field.rfind('.') == std::string_view::npos ? 0 : field.rfind('.') + 1);
        auto const pos = text.find("\"" + std::string(key) + "\"");
        if (pos == std::string_view::npos) { return "line ?"; }
        return "line " + std::to_string(line_of_offset(text, pos));
    }

    inline Matrix matrix_from_json(json const& j, char const* name)
    {
        if (!j.is_array()) { throw FormatError(std::string(name) + " must be an array of rows"); }
        std::size_t const rows = j.size();
        std::size_t const cols = rows == 0 ? 0 : j.front().size();
        Matrix m(rows, cols);
        for (std::size_t r = 0; r < rows; ++r) {
            if (!j[r].is_array() || j[r].size() != cols) {
                throw FormatError(std::string(name) + " rows must be arrays of equal length");
            }
            for (std::size_t c = 0; c < cols; ++c) { m(r, c) = j[r][c].get<double>(); }
        }
        return m;
    }

    inline json matrix_to_json(Matrix const& m)
    {
        json rows = json::array();
        for (std::size_t r = 0; r < m.rows(); ++r) {
            json row = json::array();
            for (std::size_t c = 0; c < m.cols(); ++c) { row.push_back(m(r, c)); }
            rows.push_back(std::move(row));
        }
        return rows;
    }

} // namespace detail

inline json instance_to_json(NetworkInstance const& in)
{
    json j;
    j["counts"] = {{"suppliers", in.num_suppliers}, {"plants", in.num_plants},
                   {"dcs", in.num_dcs}, {"retailers", in.num_retailers}};
    j["supplier_capacity"] = in.supplier_capacity;
    j["plant_capacity"] = in.plant_capacity;
    j["dc_capacity"] = in.dc_capacity;
    j["demand"] = in.demand;
    j["raw_unit_cost"] = in.raw_unit_cost;
    j["holding_unit_cost"] = in.holding_unit_cost;
    j["plant_dc_unit_cost"] = detail::matrix_to_json(in.plant_dc_unit_cost);
    j["dc_retailer_unit_cost"] = detail::matrix_to_json(in.dc_retailer_unit_cost);
    j["utilization"] = in.utilization;
    j["strict_per_dc"] = in.strict_per_dc;
    return j;
}

inline std::string save_instance(NetworkInstance const& in)
{
    return instance_to_json(in).dump(2) + "\n";
}

// Parses and validates an instance document; throws InstanceError listing
// every problem with its line.
inline NetworkInstance load_instance(std::string_view text)
{
    json j;
    try {
        j = json::parse(text);
    } catch (json::parse_error const& e) {
        throw InstanceError({"line " + std::to_string(detail::line_of_offset(text, e.byte == 0 ? 0 : e.byte - 1))
                             + ": malformed JSON: " + e.what()});
    }

    std::vector<std::string> problems;
    auto problem = [&](std::string const& field, std::string const& msg) {
        problems.push_back(detail::locate(text, field) + ": " + field + " " + msg);
    };

    NetworkInstance in;
    auto count = [&](char const* key, std::size_t& out) {
        try {
            auto const& v = j.at("counts").at(key);
            if (!v.is_number_integer() || v.get<long long>() < 0) {
                problem(std::string("counts.") + key, "must be a non-negative integer");
                return;
            }
            out = v.get<std::size_t>();
        } catch (json::exception const&) {
            problem(std::string("counts.") + key, "is missing");
        }
    };
    auto vec = [&](char const* key, std::vector<double>& out) {
        try {
            out = j.at(key).get<std::vector<double>>();
        } catch (json::exception const&) {
            problem(key, "must be an array of numbers");
        }
    };
    auto mat = [&](char const* key, Matrix& out) {
        try {
            out = detail::matrix_from_json(j.at(key), key);
        } catch (json::exception const&) {
            problem(key, "must be an array of numeric rows");
        } catch (FormatError const& e) {
            problems.push_back(detail::locate(text, key) + ": " + e.what());
        }
    };

    if (!j.is_object()) {
        throw InstanceError({"line 1: instance must be a JSON object"});
    }
    count("suppliers", in.num_suppliers);
    count("plants", in.num_plants);
    count("dcs", in.num_dcs);
    count("retailers", in.num_retailers);
    vec("supplier_capacity", in.supplier_capacity);
    vec("plant_capacity", in.plant_capacity);
    vec("dc_capacity", in.dc_capacity);
    vec("demand", in.demand);
    vec("raw_unit_cost", in.raw_unit_cost);
    vec("holding_unit_cost", in.holding_unit_cost);
    mat("plant_dc_unit_cost", in.plant_dc_unit_cost);
    mat("dc_retailer_unit_cost", in.dc_retailer_unit_cost);
    if (auto it = j.find("utilization"); it == j.end() || !it->is_number()) {
        problem("utilization", "must be a number");
    } else {
        in.utilization = it->get<double>();
    }
    if (auto it = j.find("strict_per_dc"); it != j.end()) {
        if (!it->is_boolean()) {
            problem("strict_per_dc", "must be true or false");
        } else {
            in.strict_per_dc = it->get<bool>();
        }
    }
    if (problems.empty()) {
        for (auto const& issue : validate_instance(in).issues) { problem(issue.field, issue.message); }
    }
    if (!problems.empty()) { throw InstanceError(std::move(problems)); }
    return in;
}

inline NetworkInstance load_instance_file(std::filesystem::path const& path)
{
    return load_instance(read_file(path));
}

// ---------------------------------------------------------------------------
// Schedule tables

// First row holds plant labels (after a corner cell), first column DC labels.
inline ScheduleTable parse_schedule_csv(std::string_view text)
{
    auto split = [](std::string_view line) {
        std::vector<std::string> cells;
        std::size_t start = 0;
        while (true) {
            auto const comma = line.find(',', start);
            auto cell = line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
            while (!cell.empty() && (cell.front() == ' ' || cell.front() == '\t')) { cell.remove_prefix(1); }
            while (!cell.empty() && (cell.back() == ' ' || cell.back() == '\t' || cell.back() == '\r')) { cell.remove_suffix(1); }
            cells.emplace_back(cell);
            if (comma == std::string_view::npos) { break; }
            start = comma + 1;
        }
        return cells;
    };

    ScheduleTable table;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    bool header = true;
    while (pos < text.size()) {
        auto const end = text.find('\n', pos);
        auto const line = text.substr(pos, end == std::string_view::npos ? std::string_view::npos : end - pos);
        pos = end == std::string_view::npos ? text.size() : end + 1;
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string_view::npos) { continue; }

        auto cells = split(line);
        auto const where = "line " + std::to_string(line_no) + ": ";
        if (header) {
            if (cells.size() < 2) { throw FormatError(where + "header needs at least one plant label"); }
            table.column_labels.assign(cells.begin() + 1, cells.end());
            header = false;
            continue;
        }
        if (cells.size() != table.column_labels.size() + 1) {
            throw FormatError(where + "expected " + std::to_string(table.column_labels.size() + 1) + " cells");
        }
        table.row_labels.push_back(cells.front());
        std::vector<std::int64_t> row;
        for (std::size_t c = 1; c < cells.size(); ++c) {
            double value = 0.0;
            auto const& cell = cells[c];
            auto const [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
            if (ec != std::errc() || ptr != cell.data() + cell.size() || value < 0.0 || std::floor(value) != value) {
                throw FormatError(where + "'" + cell + "' is not a non-negative whole number of cases");
            }
            row.push_back(static_cast<std::int64_t>(value));
        }
        table.cases.push_back(std::move(row));
    }
    if (header) { throw FormatError("schedule table is empty"); }
    return table;
}

inline std::string format_schedule_csv(ScheduleTable const& table)
{
    std::string out = "DC/Plant";
    for (auto const& label : table.column_labels) { out += "," + label; }
    out += "\n";
    for (std::size_t r = 0; r < table.cases.size(); ++r) {
        out += r < table.row_labels.size() ? table.row_labels[r] : "DC " + std::to_string(r + 1);
        for (auto v : table.cases[r]) { out += "," + std::to_string(v); }
        out += "\n";
    }
    return out;
}

inline json audit_to_json(ScheduleAudit const& audit)
{
    json breaches = json::array();
    for (auto const& b : audit.breaches) {
        breaches.push_back({{"kind", b.kind == EntityKind::plant ? "plant" : "dc"},
                            {"index", b.index},
                            {"label", b.label},
                            {"total", b.total},
                            {"capacity", b.capacity},
                            {"utilization_threshold", b.utilization_threshold}});
    }
    return {{"plant_totals", audit.plant_totals},
            {"dc_totals", audit.dc_totals},
            {"grand_total_by_rows", audit.grand_total_by_rows},
            {"grand_total_by_columns", audit.grand_total_by_columns},
            {"breaches", breaches}};
}

inline json comparison_to_json(ComparisonReport const& rep)
{
    auto opt = [](std::optional<double> v) { return v ? json(*v) : json(nullptr); };
    return {{"old_total", rep.old_total},
            {"new_total", rep.new_total},
            {"change", rep.change},
            {"percent_of_new", opt(rep.percent_of_new)},
            {"percent_of_old", opt(rep.percent_of_old)}};
}

// ---------------------------------------------------------------------------
// Solve results and traces

namespace detail {

    // 12 significant digits; -0 is written as 0.
    inline double canonical(double v)
    {
        if (!std::isfinite(v)) { return v; }
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.12g", v);
        double const r = std::strtod(buf, nullptr);
        return r == 0.0 ? 0.0 : r;
    }

    inline void canonicalize(json& j)
    {
        if (j.is_number_float()) {
            j = canonical(j.get<double>());
        } else if (j.is_structured()) {
            for (auto& child : j) { canonicalize(child); }
        }
    }

    inline std::string format_number(double v)
    {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.12g", canonical(v));
        return buf;
    }

} // namespace detail

inline std::string to_string(Termination t)
{
    return t == Termination::stall ? "stall" : "max_generations";
}

inline json result_to_json(SolveResult const& result)
{
    json j;
    if (result.best_feasible) {
        auto const& c = result.best_feasible->cost;
        auto const& p = result.best_feasible->plan;
        j["best_feasible"] = {
            {"cost", {{"raw_cost", c.raw_cost},
                      {"plant_to_dc_cost", c.plant_to_dc_cost},
                      {"holding_cost", c.holding_cost},
                      {"dc_to_retailer_cost", c.dc_to_retailer_cost},
                      {"total", c.total}}},
            {"plan", {{"raw_flow", detail::matrix_to_json(p.raw_flow)},
                      {"plant_dc_flow", detail::matrix_to_json(p.plant_dc_flow)},
                      {"dc_retailer_flow", detail::matrix_to_json(p.dc_retailer_flow)}}},
        };
    } else {
        j["best_feasible"] = nullptr;
    }
    json front = json::array();
    for (auto const& ind : result.final_front) {
        front.push_back({{"cost", ind.objectives.cost}, {"violation", ind.objectives.violation}});
    }
    j["final_front"] = std::move(front);
    j["generations_run"] = result.generations_run;
    j["terminated_by"] = to_string(result.terminated_by);
    return j;
}

// Canonical text: sorted keys, two-space indent, floats at 12 significant digits.
inline std::string serialize_result(json doc)
{
    detail::canonicalize(doc);
    return doc.dump(2) + "\n";
}

inline std::string serialize_result(SolveResult const& result)
{
    return serialize_result(result_to_json(result));
}

inline json load_result(std::string_view text)
{
    json j;
    try {
        j = json::parse(text);
    } catch (json::parse_error const& e) {
        throw FormatError(std::string("malformed result JSON: ") + e.what());
    }
    for (auto const* key : {"best_feasible", "final_front", "generations_run", "terminated_by"}) {
        if (!j.contains(key)) { throw FormatError(std::string("result is missing '") + key + "'"); }
    }
    return j;
}

inline void save_result(SolveResult const& result, std::filesystem::path const& path)
{
    write_file_atomic(path, serialize_result(result));
}

inline std::string trace_csv(SolveResult const& result)
{
    std::string out = "generation,best_feasible_cost,mean_cost,min_violation,feasible_count\n";
    for (auto const& rec : result.trace) {
        out += std::to_string(rec.generation) + ",";
        if (rec.best_feasible_cost) { out += detail::format_number(*rec.best_feasible_cost); }
        out += "," + detail::format_number(rec.mean_cost) + "," + detail::format_number(rec.min_violation) + ","
            + std::to_string(rec.feasible_count) + "\n";
    }
    return out;
}

inline void emit_trace(SolveResult const& result, std::filesystem::path const& path)
{
    write_file_atomic(path, trace_csv(result));
}

} // namespace scnet
