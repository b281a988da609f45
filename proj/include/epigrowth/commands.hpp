#pragma once

#include "epigrowth/backtest.hpp"
#include "epigrowth/calibration.hpp"
#include "epigrowth/data_io.hpp"
#include "epigrowth/report.hpp"
#include "epigrowth/scenario.hpp"

#include <cstdlib>
#include <filesystem>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace epigrowth::cli
{

inline constexpr const char* data_dir_env = "EPIGROWTH_DATA_DIR";

/// Settings shared by every subcommand. Precedence: flag, then config file,
/// then built-in defaults.
struct Common {
    std::optional<fs::path> config;
    std::optional<fs::path> params;
};

inline RunConfig resolve_config(const Common& c)
{
    RunConfig cfg = c.config ? load_config(*c.config) : RunConfig{};
    if (c.params) {
        cfg.params = params_from_json(parse_json_file(*c.params), cfg.params);
    }
    return cfg;
}

/// Flag, then environment variable, then config `paths.data_dir`.
inline fs::path resolve_data_dir(const std::optional<fs::path>& flag, const RunConfig& cfg)
{
    if (flag) {
        return *flag;
    }
    if (const char* env = std::getenv(data_dir_env); env && *env) {
        return env;
    }
    if (cfg.data_dir) {
        return *cfg.data_dir;
    }
    throw InvalidArgument(std::string("no data directory: pass --data/--observed or set ") + data_dir_env);
}

/// Flag, then config `paths.out_dir`, then "out".
inline fs::path resolve_out_dir(const std::optional<fs::path>& flag, const RunConfig& cfg)
{
    if (flag) {
        return *flag;
    }
    return cfg.out_dir ? fs::path(*cfg.out_dir) : fs::path("out");
}

inline std::vector<std::string> split_list(const std::string& s)
{
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = csv::trim(item);
        if (!item.empty()) {
            out.push_back(item);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------

struct CalibrateArgs {
    Common common;
    std::optional<fs::path> data_dir;
    fs::path out = "params.json";
};

/// Writes the params file plus `calibration.md` and `calibration.json` next
/// to it.
inline CalibrationResult cmd_calibrate(const CalibrateArgs& a, std::ostream& log)
{
    const RunConfig cfg = resolve_config(a.common);
    const fs::path dir = resolve_data_dir(a.data_dir, cfg);
    const CalibrationData data = load_calibration_data(dir, &log);
    const CalibrationResult res = calibrate(data);

    const fs::path out_dir = a.out.has_parent_path() ? a.out.parent_path() : fs::path(".");
    write_params(res.params, a.out);
    write_file_atomic(out_dir / "calibration.md", calibration_report(res));
    write_file_atomic(out_dir / "calibration.json", calibration_json(res).dump(2) + "\n");
    write_manifest(out_dir, "calibrate", {a.out, out_dir / "calibration.md", out_dir / "calibration.json"});
    log << calibration_report(res);
    return res;
}

// ---------------------------------------------------------------------------

struct SimulateArgs {
    Common common;
    std::string scenario = "no-intervention";
    std::optional<fs::path> out_dir;
    bool plots = true;
};

inline Scenario resolve_scenario(const std::string& name, const RunConfig& cfg)
{
    if (name == "no-pandemic") {
        return no_pandemic_scenario();
    }
    if (name == "no-intervention") {
        return no_intervention_scenario();
    }
    if (const auto it = cfg.scenarios.find(name); it != cfg.scenarios.end()) {
        return it->second;
    }
    if (fs::is_regular_file(name)) {
        Scenario base = no_intervention_scenario();
        base.name = fs::path(name).stem().string();
        return scenario_from_json(parse_json_file(name), base);
    }
    std::string known = "no-pandemic, no-intervention";
    for (const auto& [key, s] : cfg.scenarios) {
        known += ", " + key;
    }
    throw InvalidArgument("unknown scenario '" + name + "' (known: " + known + "; or a scenario JSON file)");
}

/// No-pandemic run stretched to cover `sc`.
inline Scenario reference_for(const Scenario& sc)
{
    Scenario ref = no_pandemic_scenario();
    ref.end_of_interest = std::max(ref.end_of_interest, sc.end_of_interest);
    ref.horizon = std::max(ref.horizon, sc.horizon);
    return ref;
}

inline SummaryMetrics cmd_simulate(const SimulateArgs& a, std::ostream& log)
{
    const RunConfig cfg = resolve_config(a.common);
    const fs::path out_dir = resolve_out_dir(a.out_dir, cfg);
    const Scenario sc = resolve_scenario(a.scenario, cfg);
    const Trajectory traj = run_scenario(sc, cfg.params);
    const Trajectory ref = sc == no_pandemic_scenario() ? traj : run_scenario(reference_for(sc), cfg.params);

    std::vector<Date> ratio_dates;
    for (const Date& d : cfg.ratio_dates) {
        if (traj.index_of(d)) {
            ratio_dates.push_back(d);
        }
    }
    const SummaryMetrics m = summarize(traj, ref, ratio_dates);

    std::vector<fs::path> files{out_dir / "trajectory.csv", out_dir / "metrics.json",
                                out_dir / "scenario.json", out_dir / "params.json"};
    write_trajectory(traj, files[0]);
    write_file_atomic(files[1], metrics_to_json(m, traj, ref.scenario).dump(2) + "\n");
    write_file_atomic(files[2], scenario_to_json(sc).dump(2) + "\n");
    write_params(cfg.params, files[3]);
    if (a.plots) {
        std::vector<const Trajectory*> trajs{&traj};
        if (ref.scenario != traj.scenario) {
            trajs.push_back(&ref);
        }
        for (const auto& f : emit_plots(trajs, {"I", "D", "Y", "C"}, out_dir / "plots")) {
            files.push_back(f);
        }
    }
    write_manifest(out_dir, "simulate", files);
    log << sc.name << ": total deaths " << csv::format_double(m.total_deaths) << ", peak "
        << csv::format_double(m.peak_active_infections) << " on " << m.peak_date.to_string()
        << ", max output drop " << fmt("%.2f", m.max_output_drop_pct) << "% on "
        << m.max_output_drop_date.to_string() << "\n";
    return m;
}

// ---------------------------------------------------------------------------

struct SweepArgs {
    Common common;
    std::string axis;
    std::optional<std::string> values; // comma separated; config grid when absent
    std::optional<fs::path> out_dir;
    bool serial = false;
    bool plots = true;
};

inline std::vector<SweepRun> cmd_sweep(const SweepArgs& a, std::ostream& log)
{
    const RunConfig cfg = resolve_config(a.common);
    const fs::path out_dir = resolve_out_dir(a.out_dir, cfg);
    std::vector<std::string> items;
    if (a.values) {
        items = split_list(*a.values);
        if (items.empty()) {
            throw InvalidArgument("--values is empty");
        }
    }

    SweepSetup setup;
    setup.start = cfg.sweeps.start;
    setup.intensity = cfg.sweeps.intensity_p;
    setup.duration_days = cfg.sweeps.duration_days;
    setup.parallel = !a.serial;
    Scenario ref_sc = reference_for(setup.base);
    setup.reference = run_scenario(ref_sc, cfg.params);
    for (const Date& d : cfg.ratio_dates) {
        if (d >= setup.base.start_date && d <= setup.base.end_of_interest) {
            setup.ratio_dates.push_back(d);
        }
    }

    std::vector<SweepRun> runs;
    if (a.axis == "start") {
        std::vector<Date> dates = cfg.sweeps.start_dates;
        if (a.values) {
            dates.clear();
            for (const auto& s : items) {
                dates.push_back(Date::parse(s));
            }
        }
        runs = sweep_start_dates(cfg.params, dates, setup);
    }
    else if (a.axis == "intensity") {
        std::vector<double> pct = cfg.sweeps.intensities_pct;
        if (a.values) {
            pct.clear();
            for (const auto& s : items) {
                const auto v = csv::to_double(s);
                if (!v) {
                    throw InvalidArgument("intensity '" + s + "' is not a number (percent of GDP)");
                }
                pct.push_back(*v);
            }
        }
        std::vector<double> fractions;
        for (double v : pct) {
            fractions.push_back(v / 100);
        }
        runs = sweep_intensity(cfg.params, fractions, setup);
    }
    else if (a.axis == "duration") {
        std::vector<int> weeks = cfg.sweeps.durations_weeks;
        if (a.values) {
            weeks.clear();
            for (const auto& s : items) {
                const auto v = csv::to_int(s);
                if (!v || *v < 0) {
                    throw InvalidArgument("duration '" + s + "' is not a non-negative number of weeks");
                }
                weeks.push_back(*v);
            }
        }
        runs = sweep_duration(cfg.params, weeks, setup);
    }
    else {
        throw InvalidArgument("unknown sweep axis '" + a.axis + "' (start, intensity, duration)");
    }

    std::vector<fs::path> files{out_dir / "comparison.csv"};
    write_file_atomic(files[0], sweep_comparison_csv(runs));
    std::vector<const Trajectory*> trajs;
    for (const SweepRun& r : runs) {
        if (!r.trajectory) {
            log << r.key << ": failed: " << r.error << "\n";
            continue;
        }
        const fs::path dir = out_dir / r.key;
        write_trajectory(*r.trajectory, dir / "trajectory.csv");
        write_file_atomic(dir / "metrics.json",
                          metrics_to_json(*r.metrics, *r.trajectory, setup.reference->scenario).dump(2) + "\n");
        files.push_back(dir / "trajectory.csv");
        files.push_back(dir / "metrics.json");
        trajs.push_back(&*r.trajectory);
        log << r.key << ": total deaths " << csv::format_double(r.metrics->total_deaths) << ", peak on "
            << r.metrics->peak_date.to_string() << "\n";
    }
    if (a.plots && !trajs.empty()) {
        for (const auto& f : emit_plots(trajs, {"I", "D", "Y"}, out_dir / "plots")) {
            files.push_back(f);
        }
    }
    write_manifest(out_dir, "sweep", files);
    return runs;
}

// ---------------------------------------------------------------------------

struct BacktestArgs {
    Common common;
    std::optional<fs::path> observed_dir;
    std::optional<fs::path> out_dir;
    bool plots = true;
};

/// Population, GDP and GCF from `dir/datasets.json`.
inline BacktestData load_backtest_data(const fs::path& dir)
{
    const fs::path index = dir / "datasets.json";
    if (!fs::exists(index)) {
        throw InvalidArgument("missing observed data in " + dir.string() + ": datasets.json");
    }
    BacktestData d;
    std::string missing;
    bool have_pop = false, have_gdp = false, have_gcf = false;
    for (const auto& m : load_dataset_index(index)) {
        if (!fs::exists(m.path)) {
            continue;
        }
        if (m.kind == DatasetKind::population) {
            d.population = load_annual_series(m);
            have_pop = true;
        }
        else if (m.kind == DatasetKind::gdp) {
            d.gdp = load_annual_series(m);
            have_gdp = true;
        }
        else if (m.kind == DatasetKind::gcf) {
            d.gcf = load_annual_series(m);
            have_gcf = true;
        }
    }
    for (const auto& [ok, name] : {std::pair{have_pop, "population"}, {have_gdp, "gdp"}, {have_gcf, "gcf"}}) {
        if (!ok) {
            missing += (missing.empty() ? "" : ", ") + std::string(name);
        }
    }
    if (!missing.empty()) {
        throw InvalidArgument("missing observed series in " + dir.string() + ": " + missing);
    }
    return d;
}

inline BacktestReport cmd_backtest(const BacktestArgs& a, std::ostream& log)
{
    const RunConfig cfg = resolve_config(a.common);
    const fs::path out_dir = resolve_out_dir(a.out_dir, cfg);
    const fs::path dir = resolve_data_dir(a.observed_dir, cfg);
    const BacktestOptions opt;
    const BacktestReport rep = backtest(cfg.params, load_backtest_data(dir), opt);

    std::vector<fs::path> files{out_dir / "backtest.csv", out_dir / "backtest.json",
                                out_dir / "trajectory.csv"};
    write_file_atomic(files[0], backtest_csv(rep));
    write_file_atomic(files[1], backtest_json(rep, opt.gdp_tolerance).dump(2) + "\n");
    write_trajectory(rep.trajectory, files[2]);
    if (a.plots) {
        svg::LineChart chart;
        chart.title = "Annual GDP: observed and simulated";
        chart.y_label = "USD per year";
        svg::Series obs{"observed", {}, {}}, sim{"simulated", {}, {}};
        for (const BacktestRow& row : rep.gdp.rows) {
            obs.dates.push_back(Date(row.year, 7, 1));
            obs.values.push_back(row.observed);
            sim.dates.push_back(Date(row.year, 7, 1));
            sim.values.push_back(row.simulated);
        }
        chart.series = {obs, sim};
        files.push_back(out_dir / "gdp_fit.svg");
        write_file_atomic(files.back(), svg::render(chart));
    }
    write_manifest(out_dir, "backtest", files);
    for (const BacktestRow& row : rep.gdp.rows) {
        log << row.year << "  GDP error " << fmt("%+.2f", 100 * row.rel_error) << "%\n";
    }
    log << "max |GDP error| " << fmt("%.2f", 100 * rep.gdp.max_abs_error) << "% ("
        << (rep.gdp_within_tolerance ? "within" : "outside") << " " << fmt("%.0f", 100 * opt.gdp_tolerance)
        << "%)\n";
    for (const auto& f : rep.flags) {
        log << "flag: " << f << "\n";
    }
    return rep;
}

// ---------------------------------------------------------------------------

struct ReportArgs {
    std::vector<fs::path> trajectories;
    std::vector<std::string> variables;
    fs::path out_dir = "out";
};

inline std::vector<fs::path> cmd_report(const ReportArgs& a, std::ostream& log)
{
    if (a.trajectories.empty()) {
        throw InvalidArgument("report needs at least one trajectory file");
    }
    std::vector<Trajectory> trajs;
    for (const fs::path& p : a.trajectories) {
        trajs.push_back(read_trajectory(p));
        if (p.stem() == "trajectory" && p.has_parent_path()) {
            trajs.back().scenario = p.parent_path().filename().string();
        }
    }
    std::vector<const Trajectory*> ptrs;
    for (const Trajectory& t : trajs) {
        ptrs.push_back(&t);
    }
    const auto files = emit_plots(ptrs, a.variables, a.out_dir);
    write_manifest(a.out_dir, "report", files);
    log << "wrote " << files.size() << " files to " << a.out_dir.string() << "\n";
    return files;
}

} // namespace epigrowth::cli
