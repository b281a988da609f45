#pragma once

#include "epigrowth/date.hpp"
#include "epigrowth/epidemic.hpp"
#include "epigrowth/error.hpp"
#include "epigrowth/params.hpp"
#include "epigrowth/regression.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace epigrowth
{

/// Yearly observations with consecutive years.
struct AnnualSeries {
    std::vector<int> years;
    std::vector<double> values;

    std::size_t size() const
    {
        return years.size();
    }
    bool empty() const
    {
        return years.empty();
    }
    int first_year() const
    {
        return years.front();
    }
    int last_year() const
    {
        return years.back();
    }
    bool contains(int year) const
    {
        return !empty() && year >= first_year() && year <= last_year();
    }
    /// Value for `year`; throws if the year is outside the series.
    double at(int year) const
    {
        if (!contains(year)) {
            throw InvalidArgument("year " + std::to_string(year) + " outside series");
        }
        return values[std::size_t(year - first_year())];
    }
    AnnualSeries slice(int first, int last) const
    {
        AnnualSeries out;
        for (int y = first; y <= last; ++y) {
            out.years.push_back(y);
            out.values.push_back(at(y));
        }
        return out;
    }

    bool operator==(const AnnualSeries&) const = default;
};

inline void validate(const AnnualSeries& s)
{
    if (s.years.size() != s.values.size()) {
        throw InvalidArgument("annual series has mismatched year/value lengths");
    }
    for (std::size_t i = 1; i < s.years.size(); ++i) {
        if (s.years[i] != s.years[i - 1] + 1) {
            throw InvalidArgument("annual series is not consecutive at year " + std::to_string(s.years[i]));
        }
    }
}

/// Cumulative daily case counts.
struct CaseSeries {
    std::vector<Date> dates;
    std::vector<double> confirmed;
    std::vector<double> recovered;
    std::vector<double> deaths;

    std::size_t size() const
    {
        return dates.size();
    }
    double active(std::size_t t) const
    {
        return confirmed[t] - recovered[t] - deaths[t];
    }
};

// ---------------------------------------------------------------------------
// Small statistics helpers

/// Linear interpolation between order statistics (the R type 7 rule).
inline double quantile(std::vector<double> series, double q)
{
    if (series.empty()) {
        throw InvalidArgument("quantile of an empty series");
    }
    if (!(q >= 0 && q <= 1)) {
        throw InvalidArgument("quantile level must lie in [0, 1]");
    }
    std::sort(series.begin(), series.end());
    const double pos = q * double(series.size() - 1);
    const std::size_t lo = std::size_t(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, series.size() - 1);
    return series[lo] + (pos - double(lo)) * (series[hi] - series[lo]);
}

// ---------------------------------------------------------------------------
// Population

struct PopulationFit {
    double a1_annual = 1;
    double a2_annual = 0;
    OlsFit regression;
};

/// No-intercept regression of N_{t+1} on (N_t, N_t^2).
inline PopulationFit fit_population(const AnnualSeries& series)
{
    validate(series);
    if (series.size() < 3) {
        throw InvalidArgument("population fit needs at least 3 years of data");
    }
    std::vector<double> lag, lag_sq, next;
    for (std::size_t i = 0; i + 1 < series.size(); ++i) {
        lag.push_back(series.values[i]);
        lag_sq.push_back(series.values[i] * series.values[i]);
        next.push_back(series.values[i + 1]);
    }
    PopulationFit out;
    out.regression = ols({lag, lag_sq}, next, false);
    out.a1_annual = out.regression.coefficients[0];
    out.a2_annual = out.regression.coefficients[1];
    return out;
}

/// Iterates the daily logistic model `days` steps from n.
inline double project_population(const PopGrowthParams& pop, double n, long days)
{
    for (long d = 0; d < days; ++d) {
        n = pop.next(n);
    }
    return n;
}

// ---------------------------------------------------------------------------
// Capital and productivity

/// Perpetual inventory: K_{y+1} = (1 - delta) K_y + GCF_y, with K at the
/// start of each year. The result runs one year past the last GCF year.
inline AnnualSeries impute_capital(const AnnualSeries& gcf, double delta_annual, double k_init)
{
    validate(gcf);
    if (!(k_init > 0)) {
        throw InvalidArgument("initial capital must be positive");
    }
    if (!(delta_annual >= 0 && delta_annual < 1)) {
        throw InvalidArgument("depreciation rate must lie in [0, 1)");
    }
    AnnualSeries k;
    if (gcf.empty()) {
        return k;
    }
    k.years.push_back(gcf.first_year());
    k.values.push_back(k_init);
    for (std::size_t i = 0; i < gcf.size(); ++i) {
        k.years.push_back(gcf.years[i] + 1);
        k.values.push_back((1 - delta_annual) * k.values.back() + gcf.values[i]);
    }
    return k;
}

/// Steady-state starting stock GCF_0 / (delta + g), g being the mean growth
/// rate of investment over the first `window` years.
inline double steady_state_initial_capital(const AnnualSeries& gcf, double delta_annual, std::size_t window = 10)
{
    validate(gcf);
    if (gcf.size() < 2) {
        throw InvalidArgument("need at least two years of investment data");
    }
    const std::size_t n = std::min(window, gcf.size() - 1);
    double growth = 0;
    for (std::size_t i = 0; i < n; ++i) {
        growth += gcf.values[i + 1] / gcf.values[i] - 1;
    }
    growth /= double(n);
    if (!(delta_annual + growth > 0)) {
        throw InvalidArgument("delta + investment growth must be positive for a steady-state start");
    }
    return gcf.values.front() / (delta_annual + growth);
}

struct TfpEstimate {
    AnnualSeries tfp;
    double g_annual = 0;
    double g_daily = 0;
    OlsFit trend; // ln A on (1, year - first_year)
};

/**
 * @brief Solow residual A_y = Y_y / (K_y^alpha N_y^(1-alpha)) and its trend
 * growth from a log-linear fit.
 *
 * Pass daily output flows to obtain A at the model's daily scale.
 */
inline TfpEstimate estimate_tfp(const AnnualSeries& gdp, const AnnualSeries& capital, const AnnualSeries& pop,
                                double alpha)
{
    validate(gdp);
    validate(capital);
    validate(pop);
    if (gdp.size() < 2) {
        throw InvalidArgument("TFP estimation needs at least two years of output data");
    }
    if (!capital.contains(gdp.first_year()) || !capital.contains(gdp.last_year()) ||
        !pop.contains(gdp.first_year()) || !pop.contains(gdp.last_year())) {
        throw InvalidArgument("output, capital and population series are not aligned over " +
                              std::to_string(gdp.first_year()) + "-" + std::to_string(gdp.last_year()));
    }
    TfpEstimate out;
    std::vector<double> t, log_a;
    for (std::size_t i = 0; i < gdp.size(); ++i) {
        const int y = gdp.years[i];
        const double a = gdp.values[i] / (std::pow(capital.at(y), alpha) * std::pow(pop.at(y), 1 - alpha));
        out.tfp.years.push_back(y);
        out.tfp.values.push_back(a);
        t.push_back(double(y - gdp.first_year()));
        log_a.push_back(std::log(a));
    }
    out.trend = ols({t}, log_a, true);
    out.g_annual = std::exp(out.trend.coefficients[1]) - 1;
    out.g_daily = daily_growth(out.g_annual);
    return out;
}

// ---------------------------------------------------------------------------
// Epidemic rates

struct EpiRateSeries {
    std::vector<Date> dates;
    std::vector<double> b;
    std::vector<double> r;
    std::vector<double> m;
    std::vector<Date> skipped; // days without active infections
};

/**
 * @brief Daily (b, r, m) implied by cumulative case data.
 *
 * r and m are the daily recoveries and deaths per active case; b solves the
 * infection transition with S_t = N_t - confirmed_t, N_t following the
 * population model from N0 on the first date.
 */
inline EpiRateSeries extract_epi_rates(const CaseSeries& cases, const PopGrowthParams& pop, double N0)
{
    const std::size_t n = cases.size();
    if (cases.confirmed.size() != n || cases.recovered.size() != n || cases.deaths.size() != n) {
        throw InvalidArgument("case series columns have different lengths");
    }
    if (n < 2) {
        throw InvalidArgument("rate extraction needs at least two days of data");
    }
    EpiRateSeries out;
    double N = N0;
    for (std::size_t t = 0; t + 1 < n; ++t) {
        const double I = cases.active(t);
        if (I > 0) {
            const double r = (cases.recovered[t + 1] - cases.recovered[t]) / I;
            const double m = (cases.deaths[t + 1] - cases.deaths[t]) / I;
            const double S = N - cases.confirmed[t];
            const double b = (cases.active(t + 1) - (1 - r - m) * I) / (S * I);
            out.dates.push_back(cases.dates[t]);
            out.r.push_back(r);
            out.m.push_back(m);
            out.b.push_back(b);
        }
        else {
            out.skipped.push_back(cases.dates[t]);
        }
        N = pop.next(N);
    }
    return out;
}

struct LogLogFit {
    double intercept = 0;
    double slope = 0;
    OlsFit regression;
    std::size_t dropped = 0; // pairs with a non-positive value
};

/// OLS of ln y on ln x after dropping non-positive pairs.
inline LogLogFit fit_log_log(const std::vector<double>& x, const std::vector<double>& y)
{
    if (x.size() != y.size()) {
        throw InvalidArgument("log-log fit needs paired observations");
    }
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] > 0 && y[i] > 0) {
            lx.push_back(std::log(x[i]));
            ly.push_back(std::log(y[i]));
        }
    }
    if (lx.size() < 3) {
        throw InvalidArgument("log-log fit needs at least 3 positive pairs, got " + std::to_string(lx.size()));
    }
    LogLogFit out;
    out.dropped = x.size() - lx.size();
    out.regression = ols({lx}, ly, true);
    out.intercept = out.regression.coefficients[0];
    out.slope = out.regression.coefficients[1];
    return out;
}

struct MortalityFit {
    MortalityModel model;
    LogLogFit fit;
};

inline MortalityFit fit_mortality(const std::vector<double>& b_series, const std::vector<double>& m_series)
{
    MortalityFit out;
    out.fit = fit_log_log(b_series, m_series);
    out.model = {out.fit.intercept, out.fit.slope};
    return out;
}

struct TradeoffFit {
    TradeoffModel model;
    LogLogFit fit;
};

inline TradeoffFit fit_tradeoff(const std::vector<double>& gdp_shortfall_pct,
                                const std::vector<double>& infection_reduction_pct)
{
    TradeoffFit out;
    out.fit = fit_log_log(gdp_shortfall_pct, infection_reduction_pct);
    out.model = {out.fit.intercept, out.fit.slope};
    return out;
}

// ---------------------------------------------------------------------------
// Full calibration

/// Observed (dGDP%, db%) pairs, one per country-week.
struct TradeoffPanel {
    std::vector<std::string> country;
    std::vector<Date> week;
    std::vector<double> gdp_shortfall_pct;
    std::vector<double> infection_reduction_pct;
};

struct CalibrationData {
    AnnualSeries population; // persons
    AnnualSeries gdp;        // USD per year
    AnnualSeries gcf;        // USD per year
    CaseSeries cases;
    TradeoffPanel tradeoff;
};

/// Constants taken from outside the fitted data sets.
struct CalibrationAssumptions {
    double delta_annual = 0.0446;
    double alpha = 0.3;
    double discount_rate_annual = 0.08;
    double u = 5722.078;
    double h = 0.147;
    double b_quantile = 0.75;
    double r_quantile = 0.5;
    std::size_t capital_init_window = 10;
};

struct CalibrationResult {
    ModelParams params;
    PopulationFit population;
    AnnualSeries capital;
    double capital_init = 0;
    TfpEstimate tfp;
    double N0 = 0; // population on the first case date
    EpiRateSeries rates;
    MortalityFit mortality;
    TradeoffFit tradeoff;
};

inline CalibrationResult calibrate(const CalibrationData& data, const CalibrationAssumptions& as = {})
{
    CalibrationResult out;
    ModelParams& p = out.params;

    out.population = fit_population(data.population);
    const PopGrowthParams daily_pop = to_daily(out.population.a1_annual, out.population.a2_annual);
    p.a1 = daily_pop.a1;
    p.a2 = daily_pop.a2;

    out.capital_init = steady_state_initial_capital(data.gcf, as.delta_annual, as.capital_init_window);
    out.capital = impute_capital(data.gcf, as.delta_annual, out.capital_init);

    AnnualSeries gdp_daily = data.gdp;
    for (double& v : gdp_daily.values) {
        v /= days_per_year;
    }
    out.tfp = estimate_tfp(gdp_daily, out.capital, data.population, as.alpha);

    p.alpha = as.alpha;
    p.delta_daily = daily_depreciation(as.delta_annual);
    p.g_daily = out.tfp.g_daily;
    p.beta_daily = daily_discount_factor(as.discount_rate_annual);
    p.u = as.u;
    p.h = as.h;

    if (data.cases.size() < 2) {
        throw InvalidArgument("case series needs at least two days");
    }
    // Annual observations are mid-year values.
    const Date mid_year(data.population.last_year(), 7, 1);
    out.N0 = project_population(daily_pop, data.population.values.back(), data.cases.dates.front() - mid_year);
    out.rates = extract_epi_rates(data.cases, daily_pop, out.N0);
    if (out.rates.b.empty()) {
        throw InvalidArgument("no day with active infections in the case series");
    }
    p.b0 = quantile(out.rates.b, as.b_quantile);
    p.r = quantile(out.rates.r, as.r_quantile);

    out.mortality = fit_mortality(out.rates.b, out.rates.m);
    p.log_k1 = out.mortality.model.log_k1;
    p.k2 = out.mortality.model.k2;

    out.tradeoff = fit_tradeoff(data.tradeoff.gdp_shortfall_pct, data.tradeoff.infection_reduction_pct);
    p.log_q1 = out.tradeoff.model.log_q1;
    p.q2 = out.tradeoff.model.q2;
    return out;
}

} // namespace epigrowth
