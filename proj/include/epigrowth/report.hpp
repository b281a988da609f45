#pragma once

#include "epigrowth/backtest.hpp"
#include "epigrowth/calibration.hpp"
#include "epigrowth/csv.hpp"
#include "epigrowth/data_io.hpp"
#include "epigrowth/regression.hpp"
#include "epigrowth/scenario.hpp"
#include "epigrowth/svg_chart.hpp"
#include "epigrowth/version.hpp"

#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace epigrowth
{

inline const std::map<std::string, std::string>& variable_labels()
{
    static const std::map<std::string, std::string> labels{
        {"N", "population"},         {"S", "susceptible"},        {"I", "active infections"},
        {"R", "recovered"},          {"D", "deceased"},           {"A", "total factor productivity"},
        {"K", "capital (USD)"},      {"Y", "output (USD/day)"},   {"C", "consumption (USD/day)"},
        {"H", "hospital cost (USD/day)"}, {"p", "GDP shortfall"}};
    return labels;
}

/// Plot data for one variable: the union of dates and one column per
/// trajectory, blank where a trajectory has no row.
inline std::string plot_data_csv(const std::vector<const Trajectory*>& trajs, const std::string& variable)
{
    std::set<Date> dates;
    for (const Trajectory* t : trajs) {
        dates.insert(t->dates.begin(), t->dates.end());
    }
    std::string out = "date";
    for (const Trajectory* t : trajs) {
        out += "," + csv::quote(t->scenario);
    }
    out += '\n';
    for (const Date& d : dates) {
        out += d.to_string();
        for (const Trajectory* t : trajs) {
            out += ',';
            if (const auto i = t->index_of(d)) {
                out += csv::format_double((*trajectory_column(*t, variable))[*i]);
            }
        }
        out += '\n';
    }
    return out;
}

/**
 * @brief Writes `<var>.svg` and `<var>.csv` for every variable, with one
 * series per trajectory. Returns the written paths.
 */
inline std::vector<fs::path> emit_plots(const std::vector<const Trajectory*>& trajs,
                                        const std::vector<std::string>& variables, const fs::path& out_dir)
{
    if (trajs.empty()) {
        throw InvalidArgument("emit_plots needs at least one trajectory");
    }
    if (variables.empty()) {
        throw InvalidArgument("emit_plots needs at least one variable");
    }
    for (const std::string& v : variables) {
        if (v == "date" || !trajectory_column(*trajs.front(), v)) {
            std::string valid;
            for (std::size_t j = 1; j < trajectory_columns().size(); ++j) {
                valid += (j > 1 ? ", " : "") + trajectory_columns()[j];
            }
            throw InvalidArgument("unknown variable '" + v + "' (valid: " + valid + ")");
        }
    }
    std::vector<fs::path> written;
    for (const std::string& v : variables) {
        svg::LineChart chart;
        chart.title = v + ": " + variable_labels().at(v);
        chart.y_label = variable_labels().at(v);
        for (const Trajectory* t : trajs) {
            chart.series.push_back({t->scenario, t->dates, *trajectory_column(*t, v)});
        }
        const fs::path svg_path = out_dir / (v + ".svg");
        const fs::path csv_path = out_dir / (v + ".csv");
        write_file_atomic(svg_path, svg::render(chart));
        write_file_atomic(csv_path, plot_data_csv(trajs, v));
        written.push_back(svg_path);
        written.push_back(csv_path);
    }
    return written;
}

// ---------------------------------------------------------------------------
// Tables

inline std::string fmt(const char* spec, double v)
{
    char buf[64];
    std::snprintf(buf, sizeof(buf), spec, v);
    return buf;
}

/// Markdown table of one regression: term, estimate, standard error.
inline std::string regression_table(const std::string& title, const OlsFit& fit,
                                    const std::vector<std::string>& terms)
{
    std::string out = "### " + title + "\n\n| term | estimate | std. error |\n|---|---:|---:|\n";
    for (std::size_t j = 0; j < fit.coefficients.size(); ++j) {
        const std::string term = j < terms.size() ? terms[j] : "x" + std::to_string(j);
        out += "| " + term + " | " + fmt("%.6g", fit.coefficients[j]) + " | " + fmt("%.4g", fit.std_errors[j]) +
               " |\n";
    }
    out += "\nR^2 = " + fmt("%.4f", fit.r_squared) + (fit.intercept ? "" : " (uncentred)") +
           ", residual s.e. = " + fmt("%.4g", fit.residual_std_error) + ", n = " + std::to_string(fit.n_obs) +
           "\n\n";
    return out;
}

inline json regression_json(const OlsFit& fit, const std::vector<std::string>& terms)
{
    json coefs = json::array();
    for (std::size_t j = 0; j < fit.coefficients.size(); ++j) {
        coefs.push_back({{"term", j < terms.size() ? terms[j] : "x" + std::to_string(j)},
                         {"estimate", fit.coefficients[j]},
                         {"std_error", fit.std_errors[j]}});
    }
    return {{"coefficients", coefs},
            {"r_squared", fit.r_squared},
            {"residual_std_error", fit.residual_std_error},
            {"n", fit.n_obs}};
}

/// The four calibration regressions as a Markdown report.
inline std::string calibration_report(const CalibrationResult& r)
{
    std::string out = "# Calibration\n\n";
    out += regression_table("Population: N(y+1) = a1 N(y) + a2 N(y)^2", r.population.regression, {"a1", "a2"});
    out += regression_table("Total factor productivity trend: ln A = c + s (year - " +
                                std::to_string(r.tfp.tfp.first_year()) + ")",
                            r.tfp.trend, {"c", "s"});
    out += "Annual TFP growth " + fmt("%.4f", r.tfp.g_annual) + ", daily " + fmt("%.6g", r.tfp.g_daily) + ".\n\n";
    out += regression_table("Mortality: ln m = ln k1 + k2 ln b", r.mortality.fit.regression, {"ln k1", "k2"});
    out += regression_table("Trade-off: ln db% = ln q1 + q2 ln dGDP%", r.tradeoff.fit.regression, {"ln q1", "q2"});
    out += "Infection rate b0 (quantile of daily b) = " + fmt("%.6g", r.params.b0) +
           ", recovery rate r = " + fmt("%.6g", r.params.r) + ", N on first case date = " + fmt("%.6g", r.N0) +
           ".\n\nCapital stock at start of " + std::to_string(r.capital.first_year()) + " = " +
           fmt("%.6g", r.capital_init) + " USD; at start of " + std::to_string(r.capital.last_year()) + " = " +
           fmt("%.6g", r.capital.values.back()) + " USD.\n";
    return out;
}

inline json calibration_json(const CalibrationResult& r)
{
    return {{"params", params_to_json(r.params)},
            {"population", regression_json(r.population.regression, {"a1", "a2"})},
            {"tfp", regression_json(r.tfp.trend, {"c", "s"})},
            {"tfp_growth_annual", r.tfp.g_annual},
            {"mortality", regression_json(r.mortality.fit.regression, {"ln_k1", "k2"})},
            {"tradeoff", regression_json(r.tradeoff.fit.regression, {"ln_q1", "q2"})},
            {"N0", r.N0},
            {"capital_init", r.capital_init},
            {"rate_days_skipped", r.rates.skipped.size()}};
}

/// One row per sweep member; failed runs carry their error text.
inline std::string sweep_comparison_csv(const std::vector<SweepRun>& runs)
{
    std::vector<Date> ratio_dates;
    for (const SweepRun& r : runs) {
        if (r.metrics) {
            for (const auto& [d, v] : r.metrics->output_ratio_at) {
                ratio_dates.push_back(d);
            }
            break;
        }
    }
    std::string out = "key,policy_start,intensity_p,duration_days,total_deaths,peak_active_infections,peak_date,"
                      "max_output_drop_pct,max_output_drop_date";
    for (const Date& d : ratio_dates) {
        out += ",output_ratio_" + d.to_string();
    }
    out += ",welfare,error\n";
    for (const SweepRun& r : runs) {
        const auto& s = r.scenario.schedule;
        out += csv::quote(r.key) + "," + (s ? s->start.to_string() : "") + "," +
               (s ? csv::format_double(s->intensity_p) : "") + "," + (s ? std::to_string(s->duration_days) : "");
        if (r.metrics) {
            const SummaryMetrics& m = *r.metrics;
            out += "," + csv::format_double(m.total_deaths) + "," + csv::format_double(m.peak_active_infections) +
                   "," + m.peak_date.to_string() + "," + csv::format_double(m.max_output_drop_pct) + "," +
                   m.max_output_drop_date.to_string();
            for (const Date& d : ratio_dates) {
                const auto v = m.output_ratio(d);
                out += "," + (v ? csv::format_double(*v) : std::string());
            }
            out += "," + csv::format_double(m.welfare) + ",\n";
        }
        else {
            out += ",,,,,";
            for (std::size_t k = 0; k < ratio_dates.size(); ++k) {
                out += ",";
            }
            out += ",," + csv::quote(r.error) + "\n";
        }
    }
    return out;
}

inline std::string backtest_csv(const BacktestReport& rep)
{
    std::string out = "panel,year,observed,simulated,rel_error\n";
    for (const BacktestPanel* p : {&rep.gdp, &rep.population, &rep.capital, &rep.investment}) {
        for (const BacktestRow& row : p->rows) {
            out += p->name + "," + std::to_string(row.year) + "," + csv::format_double(row.observed) + "," +
                   csv::format_double(row.simulated) + "," + csv::format_double(row.rel_error) + "\n";
        }
    }
    return out;
}

inline json backtest_json(const BacktestReport& rep, double tolerance)
{
    json panels = json::object();
    for (const BacktestPanel* p : {&rep.gdp, &rep.population, &rep.capital, &rep.investment}) {
        panels[p->name] = {{"max_abs_rel_error", p->max_abs_error}, {"mean_rel_error", p->mean_error}};
    }
    return {{"gdp_tolerance", tolerance},
            {"gdp_within_tolerance", rep.gdp_within_tolerance},
            {"panels", panels},
            {"flags", rep.flags},
            {"params_hash", rep.trajectory.params_hash}};
}

/// Indexes the files of one command invocation, paths relative to `out_dir`.
inline void write_manifest(const fs::path& out_dir, const std::string& command, const std::vector<fs::path>& files)
{
    json list = json::array();
    for (const fs::path& f : files) {
        list.push_back(fs::relative(f, out_dir).generic_string());
    }
    std::sort(list.begin(), list.end());
    const json doc{{"command", command}, {"version", version}, {"renderer", svg::renderer_version},
                   {"files", list}};
    write_file_atomic(out_dir / "manifest.json", doc.dump(2) + "\n");
}

} // namespace epigrowth
