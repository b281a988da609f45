#pragma once

#include "epigrowth/error.hpp"

#include <cmath>
#include <string>

namespace epigrowth
{

struct EconState {
    double A = 1; // total factor productivity
    double K = 0; // physical capital, USD
};

/// Economic constants at daily resolution.
struct EconParams {
    double alpha = 0.3;
    double g_daily = 0;
    double delta_daily = 0;
    double u = 0; // USD per hospital admission
    double h = 0; // admissions per confirmed case
};

inline void validate(const EconParams& p)
{
    if (!(p.alpha > 0 && p.alpha < 1) || !(p.g_daily >= 0) || !(p.delta_daily > 0 && p.delta_daily < 1) ||
        !(p.u >= 0) || !(p.h >= 0 && p.h <= 1)) {
        throw InvalidArgument("economic parameters out of range");
    }
}

/// Cobb-Douglas output net of the policy shortfall p:
/// (1 - p) A K^alpha labor^(1 - alpha).
inline double production(double A, double K, double labor, double p, double alpha)
{
    if (labor <= 0 || K <= 0) {
        return 0.0;
    }
    return (1 - p) * A * std::pow(K, alpha) * std::pow(labor, 1 - alpha);
}

/// Marginal product of capital of `production`.
inline double marginal_product_capital(double A, double K, double labor, double p, double alpha)
{
    if (labor <= 0) {
        return 0.0;
    }
    return alpha * (1 - p) * A * std::pow(K, alpha - 1) * std::pow(labor, 1 - alpha);
}

inline double tfp_step(double A, double g_daily)
{
    if (!(A > 0)) {
        throw InvalidArgument("TFP must be positive");
    }
    return A * (1 + g_daily);
}

/// Direct pandemic cost: every new case b*S*I is admitted with probability
/// h at unit cost u.
inline double hospital_cost(double u, double h, double b, double S, double I)
{
    return u * h * b * S * I;
}

/// K' = (1 - delta) K + Y - C - H. Throws when C + H exceeds the available
/// resources.
inline double capital_step(double K, double delta_daily, double Y, double C, double H)
{
    const double available = (1 - delta_daily) * K + Y;
    if (C + H > available) {
        throw InvalidArgument("infeasible consumption: C + H = " + std::to_string(C + H) +
                              " exceeds available resources " + std::to_string(available));
    }
    return available - C - H;
}

} // namespace epigrowth
