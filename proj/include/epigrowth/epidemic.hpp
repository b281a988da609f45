#pragma once

#include "epigrowth/date.hpp"
#include "epigrowth/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace epigrowth
{

/// Compartment counts at one date. Counts are real-valued (continuum
/// approximation); D is cumulative and not part of the living population N.
struct EpiState {
    Date date;
    double N = 0; // living population
    double S = 0;
    double I = 0; // active infections
    double R = 0;
    double D = 0; // cumulative deceased

    /// Living persons outside S, I and R. Constant along any epi_step path.
    double unassigned() const
    {
        return N - (S + I + R);
    }
};

/// Daily transition rates: b per (person * day), r and m as daily fractions
/// of the active infections.
struct EpiRates {
    double b = 0;
    double r = 0;
    double m = 0;
};

/// Logistic population growth N' = a1 N + a2 N^2 at daily resolution.
struct PopGrowthParams {
    double a1 = 1;
    double a2 = 0;

    double next(double n) const
    {
        return a1 * n + a2 * n * n;
    }
};

/// Mortality as a power of the infection rate: ln m = log_k1 + k2 ln b.
struct MortalityModel {
    double log_k1 = 0;
    double k2 = 1;

    /// Zero when b is zero (no transmission).
    double rate(double b) const
    {
        if (b <= 0) {
            return 0.0;
        }
        return std::exp(log_k1 + k2 * std::log(b));
    }
};

/// Infection-rate reduction as a power of the GDP shortfall:
/// ln(db%) = log_q1 + q2 ln(dGDP%).
struct TradeoffModel {
    double log_q1 = 0;
    double q2 = 0.5;
};

inline void validate(const EpiRates& rates)
{
    if (!(rates.b >= 0) || !(rates.r >= 0 && rates.r <= 1) || !(rates.m >= 0 && rates.m <= 1) ||
        !(rates.r + rates.m <= 1)) {
        throw InvalidArgument("invalid epidemic rates: b=" + std::to_string(rates.b) +
                              " r=" + std::to_string(rates.r) + " m=" + std::to_string(rates.m));
    }
}

inline void validate(const PopGrowthParams& pop)
{
    // a1 = 1, a2 = 0 (no growth) is allowed alongside proper logistic growth.
    if (!(pop.a1 >= 1) || !(pop.a2 <= 0)) {
        throw InvalidArgument("population growth requires a1 >= 1 and a2 <= 0");
    }
}

inline void validate(const MortalityModel& mm)
{
    if (!(mm.k2 > 0 && mm.k2 <= 1) || !std::isfinite(mm.log_k1)) {
        throw InvalidArgument("mortality model requires k2 in (0, 1]");
    }
}

inline void validate(const TradeoffModel& t)
{
    if (!(t.q2 > 0 && t.q2 < 1) || !std::isfinite(t.log_q1)) {
        throw InvalidArgument("trade-off model requires q2 in (0, 1)");
    }
}

inline void validate(const EpiState& s)
{
    if (!(s.N >= 0 && s.S >= 0 && s.I >= 0 && s.R >= 0 && s.D >= 0)) {
        throw InvalidArgument("epidemic state on " + s.date.to_string() + " has a negative compartment");
    }
}

/**
 * @brief Advances the epidemic by one day.
 *
 * New infections are b*S*I, clamped at S so the susceptible pool cannot go
 * negative for extreme rates. Births enter S; deaths leave N.
 */
inline EpiState epi_step(const EpiState& state, const EpiRates& rates, const PopGrowthParams& pop)
{
    validate(state);
    validate(rates);
    validate(pop);

    const double births = (pop.a1 - 1) * state.N + pop.a2 * state.N * state.N;
    const double infections = std::min(rates.b * state.S * state.I, state.S);
    const double recoveries = rates.r * state.I;
    const double deaths = rates.m * state.I;

    EpiState next;
    next.date = state.date + 1;
    next.N = pop.next(state.N) - deaths;
    next.S = state.S + births - infections;
    next.I = state.I + infections - recoveries - deaths;
    next.R = state.R + recoveries;
    next.D = state.D + deaths;
    return next;
}

/// Percentage reduction of the infection rate bought by a GDP shortfall of
/// `gdp_shortfall_pct` percent. Capped at 100.
inline double policy_to_infection_reduction(double gdp_shortfall_pct, const TradeoffModel& t)
{
    if (!(gdp_shortfall_pct >= 0)) {
        throw InvalidArgument("GDP shortfall must be non-negative, got " + std::to_string(gdp_shortfall_pct));
    }
    if (gdp_shortfall_pct == 0) {
        return 0.0;
    }
    return std::min(std::exp(t.log_q1 + t.q2 * std::log(gdp_shortfall_pct)), 100.0);
}

/// Rates in force after reducing the base infection rate by `reduction_pct`
/// percent; mortality follows the reduced infection rate.
inline EpiRates effective_rates(double b0, double reduction_pct, const MortalityModel& mm, double r)
{
    if (!(reduction_pct >= 0 && reduction_pct <= 100)) {
        throw InvalidArgument("infection-rate reduction must lie in [0, 100], got " + std::to_string(reduction_pct));
    }
    EpiRates out;
    out.b = b0 * (1 - reduction_pct / 100);
    out.m = mm.rate(out.b);
    out.r = r;
    return out;
}

} // namespace epigrowth
