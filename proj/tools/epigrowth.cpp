#include "epigrowth/commands.hpp"
#include "epigrowth/version.hpp"

#include "CLI11.hpp"

#include <iostream>

namespace cli = epigrowth::cli;

namespace
{

void add_common(CLI::App* cmd, cli::Common& c)
{
    cmd->add_option("--config", c.config, "Run configuration JSON")->check(CLI::ExistingFile);
    cmd->add_option("--params", c.params, "ModelParams JSON (overrides the config)")->check(CLI::ExistingFile);
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Coupled epidemic and economic growth model"};
    app.set_version_flag("--version", std::string(epigrowth::version));
    app.require_subcommand(1);

    cli::CalibrateArgs calibrate;
    auto* c_cal = app.add_subcommand("calibrate", "Estimate ModelParams from the data sets");
    add_common(c_cal, calibrate.common);
    c_cal->add_option("--data", calibrate.data_dir, "Directory holding datasets.json (default: $EPIGROWTH_DATA_DIR)");
    c_cal->add_option("--out", calibrate.out, "Output params file")->capture_default_str();

    cli::SimulateArgs simulate;
    bool simulate_no_plots = false;
    auto* c_sim = app.add_subcommand("simulate", "Run one scenario");
    add_common(c_sim, simulate.common);
    c_sim->add_option("--scenario", simulate.scenario, "Built-in name, config scenario or scenario JSON file")
        ->capture_default_str();
    c_sim->add_option("--out", simulate.out_dir, "Output directory (default: paths.out_dir or out)");
    c_sim->add_flag("--no-plots", simulate_no_plots, "Skip SVG output");

    cli::SweepArgs sweep;
    bool sweep_no_plots = false;
    auto* c_sweep = app.add_subcommand("sweep", "Run a policy experiment");
    add_common(c_sweep, sweep.common);
    c_sweep->add_option("--axis", sweep.axis, "start | intensity | duration")
        ->required()
        ->check(CLI::IsMember({"start", "intensity", "duration"}));
    c_sweep->add_option("--values", sweep.values,
                        "Comma separated: ISO dates, intensities in percent of GDP, or durations in weeks");
    c_sweep->add_option("--out", sweep.out_dir, "Output directory (default: paths.out_dir or out)");
    c_sweep->add_flag("--serial", sweep.serial, "Run sweep members one after another");
    c_sweep->add_flag("--no-plots", sweep_no_plots, "Skip SVG output");

    cli::BacktestArgs backtest;
    bool backtest_no_plots = false;
    auto* c_bt = app.add_subcommand("backtest", "Compare a pandemic-free run from 1990 with observations");
    add_common(c_bt, backtest.common);
    c_bt->add_option("--observed", backtest.observed_dir,
                     "Directory holding datasets.json (default: $EPIGROWTH_DATA_DIR)");
    c_bt->add_option("--out", backtest.out_dir, "Output directory (default: paths.out_dir or out)");
    c_bt->add_flag("--no-plots", backtest_no_plots, "Skip SVG output");

    cli::ReportArgs report;
    std::string report_vars = "I,D,Y,C";
    auto* c_rep = app.add_subcommand("report", "Plot trajectory CSV files");
    c_rep->add_option("--trajectories", report.trajectories, "Trajectory CSV files")
        ->required()
        ->delimiter(',')
        ->check(CLI::ExistingFile);
    c_rep->add_option("--variables", report_vars, "Comma separated column names")->capture_default_str();
    c_rep->add_option("--out", report.out_dir, "Output directory")->capture_default_str();

    try {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (*c_cal) {
            cli::cmd_calibrate(calibrate, std::cout);
        }
        else if (*c_sim) {
            simulate.plots = !simulate_no_plots;
            cli::cmd_simulate(simulate, std::cout);
        }
        else if (*c_sweep) {
            sweep.plots = !sweep_no_plots;
            const auto runs = cli::cmd_sweep(sweep, std::cout);
            for (const auto& r : runs) {
                if (!r.error.empty()) {
                    std::cerr << "error: sweep member " << r.key << " failed: " << r.error << "\n";
                    return 1;
                }
            }
        }
        else if (*c_bt) {
            backtest.plots = !backtest_no_plots;
            cli::cmd_backtest(backtest, std::cout);
        }
        else if (*c_rep) {
            report.variables = cli::split_list(report_vars);
            cli::cmd_report(report, std::cout);
        }
    }
    catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
