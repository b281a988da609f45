#pragma once

#include "epigrowth/calibration.hpp"
#include "epigrowth/csv.hpp"
#include "epigrowth/date.hpp"
#include "epigrowth/error.hpp"
#include "epigrowth/params.hpp"
#include "epigrowth/scenario.hpp"

#include "json.hpp"

#include <algorithm>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace epigrowth
{

using json = nlohmann::json;
namespace fs = std::filesystem;

// ---------------------------------------------------------------------------
// Dataset manifests

enum class DatasetKind { population, gdp, gcf, cases, tradeoff_panel };
enum class DatasetLayout { long_table, worldbank_wide };

inline std::string to_string(DatasetKind k)
{
    switch (k) {
    case DatasetKind::population:
        return "population";
    case DatasetKind::gdp:
        return "gdp";
    case DatasetKind::gcf:
        return "gcf";
    case DatasetKind::cases:
        return "cases";
    case DatasetKind::tradeoff_panel:
        return "tradeoff-panel";
    }
    return "?";
}

inline DatasetKind dataset_kind_from_string(const std::string& s)
{
    for (DatasetKind k : {DatasetKind::population, DatasetKind::gdp, DatasetKind::gcf, DatasetKind::cases,
                          DatasetKind::tradeoff_panel}) {
        if (to_string(k) == s) {
            return k;
        }
    }
    throw InvalidArgument("unknown dataset kind '" + s + "' (population, gdp, gcf, cases, tradeoff-panel)");
}

/// Where a data file lives and how to read it.
struct DatasetManifest {
    fs::path path;
    DatasetKind kind = DatasetKind::population;
    DatasetLayout layout = DatasetLayout::long_table;
    std::string country_code = "WLD"; // row filter for the World Bank layout
    std::map<std::string, std::string> columns; // logical name -> file header
    std::string units;
};

namespace detail
{

inline const std::map<std::string, double>& unit_table(DatasetKind k)
{
    static const std::map<std::string, double> people{
        {"persons", 1}, {"thousands", 1e3}, {"millions", 1e6}, {"billions", 1e9}};
    static const std::map<std::string, double> money{
        {"usd", 1}, {"thousand-usd", 1e3}, {"million-usd", 1e6}, {"billion-usd", 1e9}, {"trillion-usd", 1e12}};
    static const std::map<std::string, double> counts{{"persons", 1}};
    static const std::map<std::string, double> shares{{"percent", 1}, {"fraction", 100}};
    switch (k) {
    case DatasetKind::population:
        return people;
    case DatasetKind::gdp:
    case DatasetKind::gcf:
        return money;
    case DatasetKind::cases:
        return counts;
    case DatasetKind::tradeoff_panel:
        return shares;
    }
    return counts;
}

inline std::vector<std::string> logical_columns(DatasetKind k)
{
    switch (k) {
    case DatasetKind::cases:
        return {"date", "confirmed", "recovered", "deaths"};
    case DatasetKind::tradeoff_panel:
        return {"country", "week", "gdp_shortfall_pct", "infection_reduction_pct"};
    default:
        return {"year", "value"};
    }
}

inline std::string column_name(const DatasetManifest& m, const std::string& logical)
{
    const auto it = m.columns.find(logical);
    return it == m.columns.end() ? logical : it->second;
}

inline std::size_t find_column(const DatasetManifest& m, const csv::Row& header, const std::string& logical)
{
    const std::string name = column_name(m, logical);
    for (std::size_t j = 0; j < header.fields.size(); ++j) {
        if (csv::trim(header.fields[j]) == name) {
            return j;
        }
    }
    throw DataError(m.path.string(), header.line, "missing column '" + name + "'");
}

inline const std::string& cell(const DatasetManifest& m, const csv::Row& row, std::size_t j)
{
    if (j >= row.fields.size()) {
        throw DataError(m.path.string(), row.line,
                        "row has " + std::to_string(row.fields.size()) + " fields, expected at least " +
                            std::to_string(j + 1));
    }
    return row.fields[j];
}

inline double number(const DatasetManifest& m, const csv::Row& row, std::size_t j, const std::string& what)
{
    const std::string& c = cell(m, row, j);
    const auto v = csv::to_double(c);
    if (!v) {
        throw DataError(m.path.string(), row.line, "non-numeric " + what + " '" + c + "'");
    }
    return *v;
}

} // namespace detail

/// Scale factor that converts the manifest's units to base units.
inline double unit_scale(const DatasetManifest& m)
{
    const auto& table = detail::unit_table(m.kind);
    const auto it = table.find(m.units);
    if (it == table.end()) {
        std::string allowed;
        for (const auto& [name, scale] : table) {
            allowed += (allowed.empty() ? "" : ", ") + name;
        }
        throw InvalidArgument("units '" + m.units + "' not allowed for " + to_string(m.kind) + " (" + allowed + ")");
    }
    return it->second;
}

inline void validate(const DatasetManifest& m)
{
    unit_scale(m);
    const auto logical = detail::logical_columns(m.kind);
    for (const auto& [key, name] : m.columns) {
        if (std::find(logical.begin(), logical.end(), key) == logical.end()) {
            throw InvalidArgument("column mapping '" + key + "' is not a field of " + to_string(m.kind));
        }
    }
    if (m.layout == DatasetLayout::worldbank_wide &&
        (m.kind == DatasetKind::cases || m.kind == DatasetKind::tradeoff_panel)) {
        throw InvalidArgument("World Bank layout only applies to annual series");
    }
}

/**
 * @brief Reads a dataset index of the form
 * `{"datasets": [{"kind", "path", "layout", "country_code", "columns", "units"}]}`.
 *
 * Relative paths resolve against the index's directory.
 */
inline std::vector<DatasetManifest> load_dataset_index(const fs::path& index_path)
{
    json doc;
    try {
        doc = json::parse(read_text_file(index_path));
    }
    catch (const json::parse_error& e) {
        throw ConfigError(index_path.string(), std::string("invalid JSON: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("datasets") || !doc["datasets"].is_array()) {
        throw ConfigError(index_path.string() + "#/datasets", "expected an array of datasets");
    }
    std::vector<DatasetManifest> out;
    const std::set<std::string> known{"kind", "path", "layout", "country_code", "columns", "units", "source"};
    for (std::size_t i = 0; i < doc["datasets"].size(); ++i) {
        const json& d = doc["datasets"][i];
        const std::string at = index_path.string() + "#/datasets/" + std::to_string(i);
        for (const auto& [key, value] : d.items()) {
            if (!known.count(key)) {
                throw ConfigError(at + "/" + key, "unknown key");
            }
        }
        try {
            DatasetManifest m;
            m.kind = dataset_kind_from_string(d.at("kind").get<std::string>());
            m.path = d.at("path").get<std::string>();
            if (m.path.is_relative()) {
                m.path = index_path.parent_path() / m.path;
            }
            const std::string layout = d.value("layout", "long");
            if (layout == "worldbank-wide") {
                m.layout = DatasetLayout::worldbank_wide;
            }
            else if (layout != "long") {
                throw InvalidArgument("unknown layout '" + layout + "' (long, worldbank-wide)");
            }
            m.country_code = d.value("country_code", "WLD");
            if (d.contains("columns")) {
                m.columns = d["columns"].get<std::map<std::string, std::string>>();
            }
            m.units = d.at("units").get<std::string>();
            validate(m);
            out.push_back(std::move(m));
        }
        catch (const json::exception& e) {
            throw ConfigError(at, e.what());
        }
        catch (const InvalidArgument& e) {
            throw ConfigError(at, e.what());
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Loaders

namespace detail
{

inline AnnualSeries finish_annual(const DatasetManifest& m, std::vector<std::pair<int, double>> rows,
                                  const std::vector<std::size_t>& lines)
{
    std::map<int, std::size_t> seen;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (!seen.emplace(rows[i].first, i).second) {
            throw DataError(m.path.string(), lines[i], "duplicate year " + std::to_string(rows[i].first));
        }
    }
    if (rows.empty()) {
        throw DataError(m.path.string(), 0, "no observations");
    }
    std::vector<std::size_t> order(rows.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        order[i] = i;
    }
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return rows[a].first < rows[b].first;
    });
    AnnualSeries s;
    for (std::size_t i : order) {
        if (!s.empty() && rows[i].first != s.last_year() + 1) {
            throw DataError(m.path.string(), lines[i],
                            "gap in years before " + std::to_string(rows[i].first) + " (previous " +
                                std::to_string(s.last_year()) + ")");
        }
        s.years.push_back(rows[i].first);
        s.values.push_back(rows[i].second);
    }
    return s;
}

inline AnnualSeries load_worldbank_wide(const DatasetManifest& m, const std::vector<csv::Row>& rows)
{
    const std::string file = m.path.string();
    auto header = std::find_if(rows.begin(), rows.end(), [](const csv::Row& r) {
        return !r.fields.empty() && csv::trim(r.fields[0]) == "Country Name";
    });
    if (header == rows.end()) {
        throw DataError(file, 0, "no 'Country Name' header row");
    }
    std::size_t code_col = 0;
    bool have_code = false;
    std::vector<std::pair<std::size_t, int>> year_cols;
    for (std::size_t j = 0; j < header->fields.size(); ++j) {
        const std::string h = csv::trim(header->fields[j]);
        if (h == "Country Code") {
            code_col = j;
            have_code = true;
        }
        else if (const auto y = csv::to_int(h); y && h.size() == 4) {
            year_cols.emplace_back(j, *y);
        }
    }
    if (!have_code) {
        throw DataError(file, header->line, "missing column 'Country Code'");
    }
    if (year_cols.empty()) {
        throw DataError(file, header->line, "no year columns");
    }
    const csv::Row* match = nullptr;
    for (auto it = header + 1; it != rows.end(); ++it) {
        if (code_col < it->fields.size() && csv::trim(it->fields[code_col]) == m.country_code) {
            if (match) {
                throw DataError(file, it->line, "duplicate row for country code " + m.country_code);
            }
            match = &*it;
        }
    }
    if (!match) {
        throw DataError(file, 0, "no row with country code '" + m.country_code + "'");
    }
    const double scale = unit_scale(m);
    std::set<int> years_seen;
    std::vector<std::pair<int, double>> obs;
    std::vector<std::size_t> lines;
    for (const auto& [j, year] : year_cols) {
        if (!years_seen.insert(year).second) {
            throw DataError(file, header->line, "duplicate year " + std::to_string(year));
        }
        const std::string c = j < match->fields.size() ? csv::trim(match->fields[j]) : std::string();
        if (c.empty()) {
            continue; // World Bank leaves unpublished years blank
        }
        const auto v = csv::to_double(c);
        if (!v) {
            throw DataError(file, match->line, "non-numeric value '" + c + "' for " + std::to_string(year));
        }
        obs.emplace_back(year, *v * scale);
        lines.push_back(match->line);
    }
    return finish_annual(m, std::move(obs), lines);
}

} // namespace detail

/// Loads a population, GDP or GCF file into base units (persons, USD).
inline AnnualSeries load_annual_series(const DatasetManifest& m)
{
    validate(m);
    if (m.kind == DatasetKind::cases || m.kind == DatasetKind::tradeoff_panel) {
        throw InvalidArgument(m.path.string() + " is not an annual series");
    }
    const auto rows = csv::read_file(m.path);
    if (rows.empty()) {
        throw DataError(m.path.string(), 0, "empty file");
    }
    if (m.layout == DatasetLayout::worldbank_wide) {
        return detail::load_worldbank_wide(m, rows);
    }
    const std::size_t jy = detail::find_column(m, rows[0], "year");
    const std::size_t jv = detail::find_column(m, rows[0], "value");
    const double scale = unit_scale(m);
    std::vector<std::pair<int, double>> obs;
    std::vector<std::size_t> lines;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const std::string& yc = detail::cell(m, rows[i], jy);
        const auto year = csv::to_int(yc);
        if (!year) {
            throw DataError(m.path.string(), rows[i].line, "non-numeric year '" + yc + "'");
        }
        obs.emplace_back(*year, detail::number(m, rows[i], jv, "value") * scale);
        lines.push_back(rows[i].line);
    }
    return detail::finish_annual(m, std::move(obs), lines);
}

struct CaseLoadReport {
    std::size_t repaired_cells = 0;
    std::vector<std::size_t> repaired_lines;
};

/**
 * @brief Loads cumulative confirmed/recovered/deaths counts on consecutive
 * days.
 *
 * Downward revisions in a cumulative column are replaced by the running
 * maximum; the number of repaired cells is written to `log` and `report`.
 */
inline CaseSeries load_case_series(const DatasetManifest& m, CaseLoadReport* report = nullptr,
                                   std::ostream* log = &std::clog)
{
    validate(m);
    if (m.kind != DatasetKind::cases) {
        throw InvalidArgument(m.path.string() + " is not a case series");
    }
    const auto rows = csv::read_file(m.path);
    if (rows.empty()) {
        throw DataError(m.path.string(), 0, "empty file");
    }
    if (rows.size() < 2) {
        throw DataError(m.path.string(), 0, "no observations");
    }
    const std::size_t jd = detail::find_column(m, rows[0], "date");
    const std::size_t jc = detail::find_column(m, rows[0], "confirmed");
    const std::size_t jr = detail::find_column(m, rows[0], "recovered");
    const std::size_t jx = detail::find_column(m, rows[0], "deaths");

    CaseSeries s;
    CaseLoadReport rep;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const csv::Row& row = rows[i];
        const std::string& dc = detail::cell(m, row, jd);
        Date d;
        try {
            d = Date::parse(csv::trim(dc));
        }
        catch (const InvalidArgument&) {
            throw DataError(m.path.string(), row.line, "unparseable date '" + dc + "'");
        }
        if (!s.dates.empty() && d != s.dates.back() + 1) {
            throw DataError(m.path.string(), row.line,
                            "date " + d.to_string() + " does not follow " + s.dates.back().to_string());
        }
        s.dates.push_back(d);
        bool repaired = false;
        auto push = [&](std::vector<double>& col, std::size_t j, const char* what) {
            double v = detail::number(m, row, j, what);
            if (v < 0) {
                throw DataError(m.path.string(), row.line, std::string("negative ") + what + " count");
            }
            if (!col.empty() && v < col.back()) {
                v = col.back();
                ++rep.repaired_cells;
                repaired = true;
            }
            col.push_back(v);
        };
        push(s.confirmed, jc, "confirmed");
        push(s.recovered, jr, "recovered");
        push(s.deaths, jx, "deaths");
        if (repaired) {
            rep.repaired_lines.push_back(row.line);
        }
    }
    if (rep.repaired_cells > 0 && log) {
        *log << "note: " << m.path.string() << ": repaired " << rep.repaired_cells
             << " non-monotone cumulative cell(s) by running maximum\n";
    }
    if (report) {
        *report = rep;
    }
    return s;
}

inline TradeoffPanel load_tradeoff_panel(const DatasetManifest& m)
{
    validate(m);
    if (m.kind != DatasetKind::tradeoff_panel) {
        throw InvalidArgument(m.path.string() + " is not a trade-off panel");
    }
    const auto rows = csv::read_file(m.path);
    if (rows.size() < 2) {
        throw DataError(m.path.string(), 0, "no observations");
    }
    const std::size_t jc = detail::find_column(m, rows[0], "country");
    const std::size_t jw = detail::find_column(m, rows[0], "week");
    const std::size_t jg = detail::find_column(m, rows[0], "gdp_shortfall_pct");
    const std::size_t jb = detail::find_column(m, rows[0], "infection_reduction_pct");
    const double scale = unit_scale(m);
    TradeoffPanel p;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const csv::Row& row = rows[i];
        const std::string& wc = detail::cell(m, row, jw);
        try {
            p.week.push_back(Date::parse(csv::trim(wc)));
        }
        catch (const InvalidArgument&) {
            throw DataError(m.path.string(), row.line, "unparseable date '" + wc + "'");
        }
        p.country.push_back(csv::trim(detail::cell(m, row, jc)));
        p.gdp_shortfall_pct.push_back(detail::number(m, row, jg, "GDP shortfall") * scale);
        p.infection_reduction_pct.push_back(detail::number(m, row, jb, "infection reduction") * scale);
    }
    return p;
}

/// Loads every dataset listed in `dir/datasets.json`. All missing kinds are
/// reported together.
inline CalibrationData load_calibration_data(const fs::path& dir, std::ostream* log = &std::clog)
{
    const fs::path index = dir / "datasets.json";
    if (!fs::exists(index)) {
        throw InvalidArgument("missing datasets in " + dir.string() +
                              ": datasets.json (population, gdp, gcf, cases, tradeoff-panel)");
    }
    const auto manifests = load_dataset_index(index);
    std::map<DatasetKind, const DatasetManifest*> by_kind;
    for (const auto& m : manifests) {
        by_kind[m.kind] = &m;
    }
    std::string missing;
    for (DatasetKind k : {DatasetKind::population, DatasetKind::gdp, DatasetKind::gcf, DatasetKind::cases,
                          DatasetKind::tradeoff_panel}) {
        if (!by_kind.count(k)) {
            missing += (missing.empty() ? "" : ", ") + to_string(k);
        }
        else if (!fs::exists(by_kind[k]->path)) {
            missing += (missing.empty() ? "" : ", ") + to_string(k) + " (" + by_kind[k]->path.string() + ")";
        }
    }
    if (!missing.empty()) {
        throw InvalidArgument("missing datasets in " + dir.string() + ": " + missing);
    }
    CalibrationData data;
    data.population = load_annual_series(*by_kind[DatasetKind::population]);
    data.gdp = load_annual_series(*by_kind[DatasetKind::gdp]);
    data.gcf = load_annual_series(*by_kind[DatasetKind::gcf]);
    data.cases = load_case_series(*by_kind[DatasetKind::cases], nullptr, log);
    data.tradeoff = load_tradeoff_panel(*by_kind[DatasetKind::tradeoff_panel]);
    return data;
}

// ---------------------------------------------------------------------------
// Trajectory CSV

inline const std::vector<std::string>& trajectory_columns()
{
    static const std::vector<std::string> cols{"date", "N", "S", "I", "R", "D", "A", "K", "Y", "C", "H", "p"};
    return cols;
}

/// Pointer to a numeric trajectory column by its CSV name, or null.
inline const std::vector<double>* trajectory_column(const Trajectory& t, const std::string& name)
{
    static const std::vector<std::pair<std::string, std::vector<double> Trajectory::*>> table{
        {"N", &Trajectory::N}, {"S", &Trajectory::S}, {"I", &Trajectory::I}, {"R", &Trajectory::R},
        {"D", &Trajectory::D}, {"A", &Trajectory::A}, {"K", &Trajectory::K}, {"Y", &Trajectory::Y},
        {"C", &Trajectory::C}, {"H", &Trajectory::H}, {"p", &Trajectory::p}};
    for (const auto& [key, member] : table) {
        if (key == name) {
            return &(t.*member);
        }
    }
    return nullptr;
}

inline std::vector<double>* trajectory_column(Trajectory& t, const std::string& name)
{
    return const_cast<std::vector<double>*>(trajectory_column(std::as_const(t), name));
}

inline std::string trajectory_to_csv(const Trajectory& t)
{
    const auto& cols = trajectory_columns();
    std::string out;
    for (std::size_t j = 0; j < cols.size(); ++j) {
        out += (j ? "," : "") + cols[j];
    }
    out += '\n';
    for (std::size_t i = 0; i < t.size(); ++i) {
        out += t.dates[i].to_string();
        for (std::size_t j = 1; j < cols.size(); ++j) {
            out += ',';
            out += csv::format_double((*trajectory_column(t, cols[j]))[i]);
        }
        out += '\n';
    }
    return out;
}

inline void write_trajectory(const Trajectory& t, const fs::path& path)
{
    write_file_atomic(path, trajectory_to_csv(t));
}

/// Reads a trajectory CSV. Provenance fields are left empty.
inline Trajectory read_trajectory(const fs::path& path)
{
    const auto rows = csv::read_file(path);
    DatasetManifest m;
    m.path = path;
    if (rows.empty()) {
        throw DataError(path.string(), 0, "empty file");
    }
    const auto& cols = trajectory_columns();
    std::vector<std::size_t> idx;
    for (const auto& c : cols) {
        idx.push_back(detail::find_column(m, rows[0], c));
    }
    Trajectory t;
    t.scenario = path.stem().string();
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const std::string& dc = detail::cell(m, rows[i], idx[0]);
        try {
            t.dates.push_back(Date::parse(csv::trim(dc)));
        }
        catch (const InvalidArgument&) {
            throw DataError(path.string(), rows[i].line, "unparseable date '" + dc + "'");
        }
        if (t.dates.size() > 1 && t.dates.back() != t.dates[t.dates.size() - 2] + 1) {
            throw DataError(path.string(), rows[i].line, "dates are not consecutive");
        }
        for (std::size_t j = 1; j < cols.size(); ++j) {
            trajectory_column(t, cols[j])->push_back(detail::number(m, rows[i], idx[j], cols[j]));
        }
    }
    return t;
}

// ---------------------------------------------------------------------------
// JSON documents

namespace detail
{

inline void reject_unknown_keys(const json& obj, const std::set<std::string>& known, const std::string& at)
{
    if (!obj.is_object()) {
        throw ConfigError(at.empty() ? "/" : at, "expected an object");
    }
    for (const auto& [key, value] : obj.items()) {
        if (!known.count(key)) {
            std::string list;
            for (const auto& k : known) {
                list += (list.empty() ? "" : ", ") + k;
            }
            throw ConfigError(at + "/" + key, "unknown key (expected one of: " + list + ")");
        }
    }
}

template <class T>
T get_as(const json& obj, const std::string& key, const std::string& at)
{
    try {
        return obj.at(key).get<T>();
    }
    catch (const json::exception& e) {
        throw ConfigError(at + "/" + key, e.what());
    }
}

inline Date get_date(const json& obj, const std::string& key, const std::string& at)
{
    try {
        return Date::parse(get_as<std::string>(obj, key, at));
    }
    catch (const InvalidArgument& e) {
        throw ConfigError(at + "/" + key, e.what());
    }
}

inline const std::vector<std::pair<std::string, double ModelParams::*>>& param_fields()
{
    static const std::vector<std::pair<std::string, double ModelParams::*>> f{
        {"a1", &ModelParams::a1},         {"a2", &ModelParams::a2},
        {"delta_daily", &ModelParams::delta_daily}, {"alpha", &ModelParams::alpha},
        {"g_daily", &ModelParams::g_daily}, {"beta_daily", &ModelParams::beta_daily},
        {"u", &ModelParams::u},           {"h", &ModelParams::h},
        {"r", &ModelParams::r},           {"b0", &ModelParams::b0},
        {"log_k1", &ModelParams::log_k1}, {"k2", &ModelParams::k2},
        {"log_q1", &ModelParams::log_q1}, {"q2", &ModelParams::q2}};
    return f;
}

} // namespace detail

inline json params_to_json(const ModelParams& p)
{
    json j = json::object();
    for (const auto& [key, member] : detail::param_fields()) {
        j[key] = p.*member;
    }
    return j;
}

/// Applies the keys present in `j` on top of `base`; unknown keys are errors.
inline ModelParams params_from_json(const json& j, const ModelParams& base = {}, const std::string& at = "")
{
    std::set<std::string> known;
    for (const auto& [key, member] : detail::param_fields()) {
        known.insert(key);
    }
    detail::reject_unknown_keys(j, known, at);
    ModelParams p = base;
    for (const auto& [key, member] : detail::param_fields()) {
        if (j.contains(key)) {
            p.*member = detail::get_as<double>(j, key, at);
        }
    }
    try {
        validate(p);
    }
    catch (const InvalidArgument& e) {
        throw ConfigError(at.empty() ? "/" : at, e.what());
    }
    return p;
}

inline void write_params(const ModelParams& p, const fs::path& path)
{
    write_file_atomic(path, params_to_json(p).dump(2) + "\n");
}

inline json parse_json_file(const fs::path& path)
{
    try {
        return json::parse(read_text_file(path));
    }
    catch (const json::parse_error& e) {
        throw ConfigError(path.string(), std::string("invalid JSON: ") + e.what());
    }
}

inline ModelParams read_params(const fs::path& path)
{
    return params_from_json(parse_json_file(path));
}

inline json scenario_to_json(const Scenario& s)
{
    json j{{"name", s.name},  {"start_date", s.start_date.to_string()},
           {"N0", s.N0},      {"I0", s.I0},
           {"R0", s.R0},      {"D0", s.D0},
           {"b0", s.b0},      {"A0", s.A0},
           {"K0", s.K0},      {"end_of_interest", s.end_of_interest.to_string()},
           {"horizon", s.horizon.to_string()}};
    if (s.schedule) {
        j["schedule"] = {{"start", s.schedule->start.to_string()},
                         {"intensity_p", s.schedule->intensity_p},
                         {"duration_days", s.schedule->duration_days}};
    }
    return j;
}

/// Fields absent from `j` keep their value in `base`.
inline Scenario scenario_from_json(const json& j, const Scenario& base, const std::string& at = "")
{
    detail::reject_unknown_keys(j,
                                {"name", "start_date", "N0", "I0", "R0", "D0", "b0", "A0", "K0", "schedule",
                                 "end_of_interest", "horizon"},
                                at);
    Scenario s = base;
    if (j.contains("name")) {
        s.name = detail::get_as<std::string>(j, "name", at);
    }
    for (const auto& [key, member] :
         std::vector<std::pair<std::string, double Scenario::*>>{{"N0", &Scenario::N0}, {"I0", &Scenario::I0},
                                                                 {"R0", &Scenario::R0}, {"D0", &Scenario::D0},
                                                                 {"b0", &Scenario::b0}, {"A0", &Scenario::A0},
                                                                 {"K0", &Scenario::K0}}) {
        if (j.contains(key)) {
            s.*member = detail::get_as<double>(j, key, at);
        }
    }
    if (j.contains("start_date")) {
        s.start_date = detail::get_date(j, "start_date", at);
    }
    if (j.contains("end_of_interest")) {
        s.end_of_interest = detail::get_date(j, "end_of_interest", at);
    }
    if (j.contains("horizon")) {
        s.horizon = detail::get_date(j, "horizon", at);
    }
    if (j.contains("schedule") && !j["schedule"].is_null()) {
        const json& sj = j["schedule"];
        const std::string sat = at + "/schedule";
        detail::reject_unknown_keys(sj, {"start", "intensity_p", "duration_days"}, sat);
        PolicySchedule ps;
        ps.start = detail::get_date(sj, "start", sat);
        ps.intensity_p = detail::get_as<double>(sj, "intensity_p", sat);
        ps.duration_days = detail::get_as<long>(sj, "duration_days", sat);
        s.schedule = ps;
    }
    try {
        validate(s);
    }
    catch (const InvalidArgument& e) {
        throw ConfigError(at.empty() ? "/" : at, e.what());
    }
    return s;
}

inline json metrics_to_json(const SummaryMetrics& m, const Trajectory& t, const std::string& reference)
{
    json ratios = json::array();
    for (const auto& [date, ratio] : m.output_ratio_at) {
        ratios.push_back({{"date", date.to_string()}, {"ratio", ratio}});
    }
    return {{"scenario", t.scenario},
            {"reference", reference},
            {"params_hash", t.params_hash},
            {"peak_active_infections", {{"value", m.peak_active_infections}, {"date", m.peak_date.to_string()}}},
            {"total_deaths", m.total_deaths},
            {"max_output_drop_pct", {{"value", m.max_output_drop_pct}, {"date", m.max_output_drop_date.to_string()}}},
            {"output_ratio_at", ratios},
            {"welfare", m.welfare}};
}

// ---------------------------------------------------------------------------
// Run configuration

/// Experiment grids and shared settings for the policy sweeps.
struct SweepGrids {
    std::vector<Date> start_dates;
    std::vector<double> intensities_pct{5, 15, 25};
    std::vector<int> durations_weeks{4, 28, 52, 76};
    Date start{2020, 3, 12};
    double intensity_p = 0.10;
    long duration_days = 26 * 7;

    SweepGrids()
    {
        for (Date d(2020, 4, 9); d <= Date(2020, 6, 2); d += 7) {
            start_dates.push_back(d);
        }
        start_dates.push_back(Date(2020, 7, 2));
    }

    bool operator==(const SweepGrids&) const = default;
};

struct RunConfig {
    ModelParams params;
    std::map<std::string, Scenario> scenarios; // user-defined, by name
    SweepGrids sweeps;
    std::vector<Date> ratio_dates{Date(2020, 12, 31), Date(2025, 12, 31), Date(2030, 12, 31)};
    std::optional<std::string> data_dir;
    std::optional<std::string> out_dir;

    bool operator==(const RunConfig&) const = default;
};

/**
 * @brief Parses a run configuration. Every top-level key is optional:
 * `params` (overrides), `scenarios` (name -> scenario, unspecified fields
 * taken from the no-intervention baseline), `sweeps`, `ratio_dates`, `paths`.
 */
inline RunConfig config_from_json(const json& j)
{
    detail::reject_unknown_keys(j, {"params", "scenarios", "sweeps", "ratio_dates", "paths"}, "");
    RunConfig c;
    if (j.contains("params")) {
        c.params = params_from_json(j["params"], c.params, "/params");
    }
    if (j.contains("scenarios")) {
        if (!j["scenarios"].is_object()) {
            throw ConfigError("/scenarios", "expected an object");
        }
        for (const auto& [name, sj] : j["scenarios"].items()) {
            Scenario base = no_intervention_scenario();
            base.name = name;
            c.scenarios[name] = scenario_from_json(sj, base, "/scenarios/" + name);
        }
    }
    if (j.contains("sweeps")) {
        const json& s = j["sweeps"];
        const std::string at = "/sweeps";
        detail::reject_unknown_keys(s, {"start_dates", "intensities_pct", "durations_weeks", "start", "intensity_p",
                                        "duration_days"},
                                    at);
        if (s.contains("start_dates")) {
            c.sweeps.start_dates.clear();
            for (const auto& v : detail::get_as<std::vector<std::string>>(s, "start_dates", at)) {
                try {
                    c.sweeps.start_dates.push_back(Date::parse(v));
                }
                catch (const InvalidArgument& e) {
                    throw ConfigError(at + "/start_dates", e.what());
                }
            }
        }
        if (s.contains("intensities_pct")) {
            c.sweeps.intensities_pct = detail::get_as<std::vector<double>>(s, "intensities_pct", at);
        }
        if (s.contains("durations_weeks")) {
            c.sweeps.durations_weeks = detail::get_as<std::vector<int>>(s, "durations_weeks", at);
        }
        if (s.contains("start")) {
            c.sweeps.start = detail::get_date(s, "start", at);
        }
        if (s.contains("intensity_p")) {
            c.sweeps.intensity_p = detail::get_as<double>(s, "intensity_p", at);
        }
        if (s.contains("duration_days")) {
            c.sweeps.duration_days = detail::get_as<long>(s, "duration_days", at);
        }
    }
    if (j.contains("ratio_dates")) {
        c.ratio_dates.clear();
        for (const auto& v : detail::get_as<std::vector<std::string>>(j, "ratio_dates", "")) {
            try {
                c.ratio_dates.push_back(Date::parse(v));
            }
            catch (const InvalidArgument& e) {
                throw ConfigError("/ratio_dates", e.what());
            }
        }
    }
    if (j.contains("paths")) {
        const json& p = j["paths"];
        detail::reject_unknown_keys(p, {"data_dir", "out_dir"}, "/paths");
        if (p.contains("data_dir")) {
            c.data_dir = detail::get_as<std::string>(p, "data_dir", "/paths");
        }
        if (p.contains("out_dir")) {
            c.out_dir = detail::get_as<std::string>(p, "out_dir", "/paths");
        }
    }
    return c;
}

inline json config_to_json(const RunConfig& c)
{
    json j;
    j["params"] = params_to_json(c.params);
    j["scenarios"] = json::object();
    for (const auto& [name, s] : c.scenarios) {
        j["scenarios"][name] = scenario_to_json(s);
    }
    auto dates = [](const std::vector<Date>& v) {
        json a = json::array();
        for (const Date& d : v) {
            a.push_back(d.to_string());
        }
        return a;
    };
    j["sweeps"] = {{"start_dates", dates(c.sweeps.start_dates)},
                   {"intensities_pct", c.sweeps.intensities_pct},
                   {"durations_weeks", c.sweeps.durations_weeks},
                   {"start", c.sweeps.start.to_string()},
                   {"intensity_p", c.sweeps.intensity_p},
                   {"duration_days", c.sweeps.duration_days}};
    j["ratio_dates"] = dates(c.ratio_dates);
    j["paths"] = json::object();
    if (c.data_dir) {
        j["paths"]["data_dir"] = *c.data_dir;
    }
    if (c.out_dir) {
        j["paths"]["out_dir"] = *c.out_dir;
    }
    return j;
}

inline RunConfig load_config(const fs::path& path)
{
    return config_from_json(parse_json_file(path));
}

} // namespace epigrowth
