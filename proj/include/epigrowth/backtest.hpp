#pragma once

#include "epigrowth/calibration.hpp"
#include "epigrowth/date.hpp"
#include "epigrowth/error.hpp"
#include "epigrowth/params.hpp"
#include "epigrowth/scenario.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace epigrowth
{

/// Observed annual series used to check a pandemic-free run.
struct BacktestData {
    AnnualSeries gdp;        // USD per year
    AnnualSeries population; // persons, mid-year
    AnnualSeries gcf;        // USD per year
};

struct BacktestOptions {
    int first_year = 1990;
    int last_year = 2010;
    /// The planner runs this many years past `last_year`.
    int solver_tail_years = 30;
    double gdp_tolerance = 0.10;
    double drift_threshold = 0.05;
    std::size_t capital_init_window = 10;
};

struct BacktestRow {
    int year = 0;
    double observed = 0;
    double simulated = 0;
    double rel_error = 0; // simulated / observed - 1
};

struct BacktestPanel {
    std::string name;
    std::vector<BacktestRow> rows;
    double max_abs_error = 0;
    double mean_error = 0;
};

struct BacktestReport {
    Trajectory trajectory;
    BacktestPanel gdp;
    BacktestPanel population;
    BacktestPanel capital;
    BacktestPanel investment;
    bool gdp_within_tolerance = false;
    std::vector<std::string> flags;
};

namespace detail
{

inline void finish_panel(BacktestPanel& panel)
{
    double sum = 0;
    for (BacktestRow& row : panel.rows) {
        row.rel_error = row.simulated / row.observed - 1;
        panel.max_abs_error = std::max(panel.max_abs_error, std::abs(row.rel_error));
        sum += row.rel_error;
    }
    panel.mean_error = panel.rows.empty() ? 0 : sum / double(panel.rows.size());
}

inline void require_years(const AnnualSeries& s, const char* name, int first, int last)
{
    validate(s);
    if (s.empty()) {
        throw InvalidArgument(std::string("backtest: ") + name + " series is empty");
    }
    for (int y = first; y <= last; ++y) {
        if (!s.contains(y)) {
            throw InvalidArgument(std::string("backtest: ") + name + " series has no value for " + std::to_string(y));
        }
    }
}

} // namespace detail

/**
 * @brief Runs the model without a pandemic from January 1 of `first_year`
 * and compares annual aggregates with the observations.
 *
 * Capital comes from the perpetual inventory of `gcf`; A0 is chosen so that
 * output on the first day equals observed GDP / 365.
 */
inline BacktestReport backtest(const ModelParams& params, const BacktestData& data, const BacktestOptions& opt = {})
{
    validate(params);
    if (opt.last_year < opt.first_year) {
        throw InvalidArgument("backtest: last year precedes first year");
    }
    detail::require_years(data.gdp, "GDP", opt.first_year, opt.last_year);
    detail::require_years(data.population, "population", opt.first_year, opt.last_year);
    detail::require_years(data.gcf, "gross capital formation", opt.first_year, opt.last_year);
    if (data.gcf.first_year() >= opt.first_year) {
        throw InvalidArgument("backtest: investment data must start before " + std::to_string(opt.first_year));
    }

    const double delta_annual = annual_depreciation(params.delta_daily);
    const double k_init = steady_state_initial_capital(data.gcf, delta_annual, opt.capital_init_window);
    const AnnualSeries capital = impute_capital(data.gcf, delta_annual, k_init);

    const int y0 = opt.first_year;
    const double N0 = data.population.at(y0);
    const double K0 = capital.at(y0);

    Scenario sc;
    sc.name = "backtest";
    sc.start_date = Date(y0, 1, 1);
    sc.N0 = N0;
    sc.K0 = K0;
    sc.A0 = (data.gdp.at(y0) / days_per_year) / (std::pow(K0, params.alpha) * std::pow(N0, 1 - params.alpha));
    sc.end_of_interest = Date(opt.last_year, 12, 31);
    sc.horizon = Date(opt.last_year + opt.solver_tail_years, 12, 31);

    BacktestReport rep;
    rep.trajectory = run_scenario(sc, params);
    const Trajectory& tr = rep.trajectory;
    rep.gdp.name = "gdp";
    rep.population.name = "population";
    rep.capital.name = "capital";
    rep.investment.name = "investment";

    for (int y = opt.first_year; y <= opt.last_year; ++y) {
        const std::size_t lo = *tr.index_of(Date(y, 1, 1));
        const std::size_t hi = *tr.index_of(Date(y, 12, 31));
        double output = 0;
        double invest = 0;
        for (std::size_t t = lo; t <= hi; ++t) {
            output += tr.Y[t];
            invest += tr.Y[t] - tr.C[t] - tr.H[t];
        }
        rep.gdp.rows.push_back({y, data.gdp.at(y), output, 0});
        rep.investment.rows.push_back({y, data.gcf.at(y), invest, 0});
        rep.population.rows.push_back({y, data.population.at(y), tr.N[*tr.index_of(Date(y, 7, 1))], 0});
        rep.capital.rows.push_back({y, capital.at(y), tr.K[lo], 0});
    }
    for (BacktestPanel* panel : {&rep.gdp, &rep.population, &rep.capital, &rep.investment}) {
        detail::finish_panel(*panel);
    }

    rep.gdp_within_tolerance = rep.gdp.max_abs_error < opt.gdp_tolerance;
    for (const BacktestPanel* panel : {&rep.gdp, &rep.population, &rep.capital, &rep.investment}) {
        if (panel->mean_error < -opt.drift_threshold) {
            rep.flags.push_back(panel->name + ": systematic underprediction (mean error " +
                                std::to_string(100 * panel->mean_error) + "%)");
        }
        else if (panel->mean_error > opt.drift_threshold) {
            rep.flags.push_back(panel->name + ": systematic overprediction (mean error " +
                                std::to_string(100 * panel->mean_error) + "%)");
        }
    }
    return rep;
}

} // namespace epigrowth
