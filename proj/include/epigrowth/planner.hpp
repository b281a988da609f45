#pragma once

#include "epigrowth/economy.hpp"
#include "epigrowth/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace epigrowth
{

/**
 * @brief Exogenous daily paths faced by the social planner.
 *
 * All paths share the horizon length T. Day t uses capital K_t, chooses
 * consumption C_t and leaves K_{t+1}; the capital path therefore has T + 1
 * entries with K_0 given and K_T fixed by the terminal condition.
 */
struct PlannerInputs {
    std::vector<double> labor;     // persons (S + R)
    std::vector<double> pop;       // persons (N)
    std::vector<double> tfp;       // A
    std::vector<double> hcost;     // USD per day
    std::vector<double> shortfall; // policy GDP shortfall p
    double K0 = 0;
    double beta_daily = 0;
    double alpha = 0.3;
    double delta_daily = 0;
    /// Required K_T. When empty the balanced-growth level at the horizon is
    /// used, see balanced_path_capital().
    std::optional<double> terminal_capital;

    std::size_t horizon() const
    {
        return labor.size();
    }
};

struct PlannerSolution {
    std::vector<double> consumption; // T entries
    std::vector<double> capital;     // T + 1 entries
    double welfare = 0;
    std::vector<double> euler_residuals; // T - 1 entries, index t links day t and t + 1
    int iterations = 0;
};

struct PlannerOptions {
    /// Contract: every interior Euler residual must end below this.
    double tolerance = 1e-6;
    /// Newton stops once the largest residual falls below this.
    double target = 1e-11;
    int max_iterations = 200;
};

inline void validate(const PlannerInputs& in)
{
    const std::size_t T = in.horizon();
    if (T == 0) {
        throw InvalidArgument("planner horizon must be at least one day");
    }
    if (in.pop.size() != T || in.tfp.size() != T || in.hcost.size() != T || in.shortfall.size() != T) {
        throw InvalidArgument("planner paths must all have length " + std::to_string(T));
    }
    if (!(in.beta_daily > 0 && in.beta_daily < 1) || !(in.K0 > 0) || !(in.alpha > 0 && in.alpha < 1) ||
        !(in.delta_daily > 0 && in.delta_daily <= 1)) {
        throw InvalidArgument("planner constants out of range");
    }
    for (std::size_t t = 0; t < T; ++t) {
        if (!(in.pop[t] > 0) || !(in.labor[t] >= 0) || !(in.tfp[t] > 0) || !(in.hcost[t] >= 0) ||
            !(in.shortfall[t] >= 0 && in.shortfall[t] < 1)) {
            throw InvalidArgument("planner input out of range on day " + std::to_string(t));
        }
    }
    if (in.terminal_capital && !(*in.terminal_capital >= 0)) {
        throw InvalidArgument("terminal capital must be non-negative");
    }
}

namespace detail
{

inline double output_at(const PlannerInputs& in, std::size_t t, double K)
{
    return production(in.tfp[t], K, in.labor[t], in.shortfall[t], in.alpha);
}

/// Resources available for C_t and K_{t+1}.
inline double resources_at(const PlannerInputs& in, std::size_t t, double K)
{
    return (1 - in.delta_daily) * K + output_at(in, t, K) - in.hcost[t];
}

/// Gross return on one unit of K_t, i.e. d resources_at / dK.
inline double gross_return_at(const PlannerInputs& in, std::size_t t, double K)
{
    return 1 - in.delta_daily + marginal_product_capital(in.tfp[t], K, in.labor[t], in.shortfall[t], in.alpha);
}

inline double return_curvature_at(const PlannerInputs& in, std::size_t t, double K)
{
    if (in.labor[t] <= 0) {
        return 0.0;
    }
    return in.alpha * (in.alpha - 1) * (1 - in.shortfall[t]) * in.tfp[t] * std::pow(K, in.alpha - 2) *
           std::pow(in.labor[t], 1 - in.alpha);
}

/// Consumption implied by a capital path; false if any entry is not positive.
inline bool consumption_from(const PlannerInputs& in, std::span<const double> K, std::vector<double>& C)
{
    const std::size_t T = in.horizon();
    C.resize(T);
    for (std::size_t t = 0; t < T; ++t) {
        if (!(K[t] > 0) && t > 0) {
            return false;
        }
        C[t] = resources_at(in, t, K[t]) - K[t + 1];
        if (!(C[t] > 0)) {
            return false;
        }
    }
    return true;
}

inline std::vector<double> discount_weights(const PlannerInputs& in)
{
    std::vector<double> w(in.horizon());
    for (std::size_t t = 0; t < w.size(); ++t) {
        w[t] = std::pow(in.beta_daily, double(t)) * in.pop[t];
    }
    return w;
}

/// Solves the symmetric tridiagonal system (diag, off) x = rhs in place.
inline void solve_tridiagonal(std::vector<double> diag, const std::vector<double>& off, std::vector<double>& rhs)
{
    const std::size_t n = diag.size();
    for (std::size_t i = 1; i < n; ++i) {
        const double f = off[i - 1] / diag[i - 1];
        diag[i] -= f * off[i - 1];
        rhs[i] -= f * rhs[i - 1];
    }
    rhs[n - 1] /= diag[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) {
        rhs[i] = (rhs[i] - off[i] * rhs[i + 1]) / diag[i];
    }
}

} // namespace detail

/**
 * @brief Capital stock on the balanced-growth path at the last day.
 *
 * Per-capita consumption then grows with gamma = (A_{T-1}/A_{T-2})^{1/(1-alpha)}
 * and the Euler equation pins the marginal product of capital at
 * gamma/beta - (1 - delta).
 */
inline double balanced_path_capital(const PlannerInputs& in)
{
    const std::size_t T = in.horizon();
    const std::size_t last = T - 1;
    const double tfp_growth = T >= 2 ? in.tfp[last] / in.tfp[last - 1] : 1.0;
    const double gamma = std::pow(tfp_growth, 1 / (1 - in.alpha));
    const double mpk = gamma / in.beta_daily - (1 - in.delta_daily);
    const double scale = in.alpha * (1 - in.shortfall[last]) * in.tfp[last] * tfp_growth / mpk;
    return in.labor[last] * std::pow(scale, 1 / (1 - in.alpha));
}

/// Truncated discounted welfare sum_t beta^t N_t ln(C_t / N_t).
inline double welfare(std::span<const double> consumption, std::span<const double> pop, double beta_daily)
{
    if (consumption.size() != pop.size()) {
        throw InvalidArgument("consumption and population paths differ in length");
    }
    double w = 0;
    for (std::size_t t = 0; t < consumption.size(); ++t) {
        if (!(consumption[t] > 0)) {
            throw InvalidArgument("consumption must be positive, day " + std::to_string(t));
        }
        w += std::pow(beta_daily, double(t)) * pop[t] * std::log(consumption[t] / pop[t]);
    }
    return w;
}

/// |(c_{t+1}/c_t) / (beta (1 - delta + MPK_{t+1})) - 1| with c = C/N.
inline double euler_residual(const PlannerSolution& sol, const PlannerInputs& in, std::size_t t)
{
    const std::size_t T = in.horizon();
    if (T < 2 || t + 1 >= T || sol.consumption.size() != T || sol.capital.size() != T + 1) {
        throw InvalidArgument("Euler residual undefined on boundary day " + std::to_string(t));
    }
    const double growth = (sol.consumption[t + 1] / in.pop[t + 1]) / (sol.consumption[t] / in.pop[t]);
    const double ret = in.beta_daily * detail::gross_return_at(in, t + 1, sol.capital[t + 1]);
    return std::abs(growth / ret - 1);
}

/**
 * @brief Optimal consumption path for the given exogenous paths.
 *
 * The welfare function is strictly concave in the interior capital stocks
 * K_1..K_{T-1}, and its Hessian is tridiagonal, so Newton steps with a
 * backtracking line search converge from any feasible start. The first-order
 * conditions are exactly the Euler equations reported in euler_residuals.
 *
 * Throws Infeasible when even zero consumption cannot keep resources
 * positive or reach the terminal capital.
 */
inline PlannerSolution solve(const PlannerInputs& in, const PlannerOptions& opt = {})
{
    validate(in);
    const std::size_t T = in.horizon();
    const double KT = in.terminal_capital ? *in.terminal_capital : balanced_path_capital(in);

    // Maximal accumulation: consume nothing, carry everything forward.
    {
        double K = in.K0;
        for (std::size_t t = 0; t < T; ++t) {
            K = detail::resources_at(in, t, K);
            if (!(K > 0)) {
                throw Infeasible("no positive consumption is attainable on day " + std::to_string(t), t);
            }
        }
        if (!(K > KT)) {
            throw Infeasible("terminal capital requirement cannot be met", T);
        }
    }

    std::vector<double> K(T + 1);
    K[0] = in.K0;

    // Feasible start: carry a constant share theta of resources forward and
    // bisect theta so that the path ends at or above KT.
    auto carry = [&](double theta) {
        for (std::size_t t = 0; t < T; ++t) {
            const double res = detail::resources_at(in, t, K[t]);
            if (!(res > 0)) {
                return false;
            }
            K[t + 1] = theta * res;
        }
        return K[T] >= KT;
    };
    double lo = 0, hi = 1;
    for (int i = 0; i < 200 && hi - lo > 1e-16; ++i) {
        const double mid = 0.5 * (lo + hi);
        (carry(mid) ? hi : lo) = mid;
    }
    if (!carry(hi)) {
        throw Infeasible("could not construct a feasible starting path", T);
    }
    K[T] = KT;

    std::vector<double> C;
    if (!detail::consumption_from(in, K, C)) {
        throw Infeasible("could not construct a feasible starting path", T);
    }

    PlannerSolution sol;
    const std::vector<double> w = detail::discount_weights(in);
    auto objective = [&](const std::vector<double>& c) {
        double total = 0;
        for (std::size_t t = 0; t < T; ++t) {
            total += w[t] * std::log(c[t] / in.pop[t]);
        }
        return total;
    };
    auto max_residual = [&](const std::vector<double>& c, const std::vector<double>& k) {
        double worst = 0;
        for (std::size_t t = 0; t + 1 < T; ++t) {
            const double growth = (c[t + 1] / in.pop[t + 1]) / (c[t] / in.pop[t]);
            const double ret = in.beta_daily * detail::gross_return_at(in, t + 1, k[t + 1]);
            worst = std::max(worst, std::abs(growth / ret - 1));
        }
        return worst;
    };

    if (T >= 2) {
        const std::size_t n = T - 1;
        std::vector<double> grad(n), diag(n), off(n > 0 ? n - 1 : 0);
        std::vector<double> trial_K(T + 1), trial_C;
        double value = objective(C);
        for (int it = 0; it < opt.max_iterations; ++it) {
            if (max_residual(C, K) < opt.target) {
                break;
            }
            sol.iterations = it + 1;
            // Unknown i corresponds to K_{i+1}; it enters C_i (-1) and C_{i+1}.
            for (std::size_t i = 0; i < n; ++i) {
                const std::size_t s = i + 1;
                const double fp = detail::gross_return_at(in, s, K[s]);
                const double fpp = detail::return_curvature_at(in, s, K[s]);
                grad[i] = -w[s - 1] / C[s - 1] + w[s] * fp / C[s];
                diag[i] = -w[s - 1] / (C[s - 1] * C[s - 1]) + w[s] * (fpp / C[s] - fp * fp / (C[s] * C[s]));
                if (i + 1 < n) {
                    off[i] = w[s] * fp / (C[s] * C[s]);
                }
            }
            std::vector<double> step(n);
            for (std::size_t i = 0; i < n; ++i) {
                step[i] = -grad[i];
            }
            detail::solve_tridiagonal(diag, off, step);

            double lambda = 1;
            bool accepted = false;
            while (lambda > 1e-12) {
                trial_K = K;
                for (std::size_t i = 0; i < n; ++i) {
                    trial_K[i + 1] += lambda * step[i];
                }
                if (detail::consumption_from(in, trial_K, trial_C)) {
                    const double trial_value = objective(trial_C);
                    if (trial_value >= value - 1e-14 * std::abs(value)) {
                        K.swap(trial_K);
                        C.swap(trial_C);
                        value = trial_value;
                        accepted = true;
                        break;
                    }
                }
                lambda *= 0.5;
            }
            if (!accepted) {
                break;
            }
        }
    }

    sol.capital = std::move(K);
    sol.consumption = std::move(C);
    sol.welfare = objective(sol.consumption);
    sol.euler_residuals.resize(T - 1);
    double worst = 0;
    for (std::size_t t = 0; t + 1 < T; ++t) {
        sol.euler_residuals[t] = euler_residual(sol, in, t);
        worst = std::max(worst, sol.euler_residuals[t]);
    }
    if (worst > opt.tolerance) {
        throw Error("planner did not converge: largest Euler residual " + std::to_string(worst));
    }
    return sol;
}

} // namespace epigrowth
