#pragma once

#include "epigrowth/economy.hpp"
#include "epigrowth/epidemic.hpp"
#include "epigrowth/error.hpp"

#include <cmath>
#include <string>

namespace epigrowth
{

inline constexpr double days_per_year = 365.0;

// Annual <-> daily conversions. Rates compound geometrically; the logistic
// population coefficients scale linearly.

inline double daily_depreciation(double annual)
{
    return 1 - std::pow(1 - annual, 1 / days_per_year);
}

inline double annual_depreciation(double daily)
{
    return 1 - std::pow(1 - daily, days_per_year);
}

inline double daily_discount_factor(double annual_discount_rate)
{
    return std::pow(1 + annual_discount_rate, -1 / days_per_year);
}

inline double daily_growth(double annual)
{
    return std::pow(1 + annual, 1 / days_per_year) - 1;
}

inline double annual_growth(double daily)
{
    return std::pow(1 + daily, days_per_year) - 1;
}

/// Annual logistic coefficients (a1_y, a2_y) to their daily counterparts.
inline PopGrowthParams to_daily(double a1_annual, double a2_annual)
{
    return {1 + (a1_annual - 1) / days_per_year, a2_annual / days_per_year};
}

/**
 * @brief Every calibrated constant of the model at daily resolution.
 *
 * Defaults are the global COVID-19 calibration: World Bank population
 * 1960-2018 for the logistic model, 4.46% annual depreciation, alpha = 0.3,
 * 8% annual utility discounting, H1N1 admission costs, JHU case data up to
 * early May 2020 for the epidemic rates, and the electricity-based
 * production/infection trade-off. log_k1 and log_q1 are log-space
 * intercepts.
 */
struct ModelParams {
    double a1 = 1 + (1.028 - 1) / days_per_year;
    double a2 = -2.282e-12 / days_per_year;
    double delta_daily = daily_depreciation(0.0446);
    double alpha = 0.3;
    double g_daily = 3.55e-5;
    double beta_daily = daily_discount_factor(0.08);
    double u = 5722.078;
    double h = 0.147;
    double r = 0.02099;
    double b0 = 2.041e-11;
    double log_k1 = 12.561;
    double k2 = 0.717;
    double log_q1 = 3.677;
    double q2 = 0.238;

    PopGrowthParams population() const
    {
        return {a1, a2};
    }
    MortalityModel mortality() const
    {
        return {log_k1, k2};
    }
    TradeoffModel tradeoff() const
    {
        return {log_q1, q2};
    }
    EconParams economy() const
    {
        return {alpha, g_daily, delta_daily, u, h};
    }

    bool operator==(const ModelParams&) const = default;
};

inline void validate(const ModelParams& p)
{
    validate(p.population());
    validate(p.mortality());
    validate(p.tradeoff());
    validate(p.economy());
    if (!(p.beta_daily > 0 && p.beta_daily < 1)) {
        throw InvalidArgument("beta_daily must lie in (0, 1)");
    }
    if (!(p.r >= 0 && p.r <= 1) || !(p.b0 >= 0)) {
        throw InvalidArgument("recovery rate must lie in [0, 1] and b0 must be non-negative");
    }
}

} // namespace epigrowth
