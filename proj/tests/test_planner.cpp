#include "epigrowth/params.hpp"
#include "epigrowth/planner.hpp"

#include "oracles.hpp"
#include "test_util.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace epigrowth;
using namespace epigrowth::test;

TEST(Planner, SteadyStateIsFixedPoint)
{
    PlannerInputs in = flat_inputs(300, 0);
    const double Kstar = golden_rule_capital(in);
    in.K0 = Kstar;
    in.terminal_capital = Kstar;
    const PlannerSolution sol = solve(in);
    const double Cstar = std::pow(Kstar, 0.3) - 0.05 * Kstar;
    for (std::size_t t = 0; t < in.horizon(); ++t) {
        ASSERT_TRUE(rel_near(sol.capital[t], Kstar, 1e-10)) << t;
        ASSERT_TRUE(rel_near(sol.consumption[t], Cstar, 1e-10)) << t;
    }
    for (std::size_t t = 0; t + 1 < in.horizon(); ++t) {
        EXPECT_LE(euler_residual(sol, in, t), 1e-10);
    }
}

TEST(Planner, BalancedPathTerminalMatchesGoldenRuleWithoutGrowth)
{
    PlannerInputs in = flat_inputs(10, 1);
    EXPECT_TRUE(rel_near(balanced_path_capital(in), golden_rule_capital(in), 1e-12));
}

TEST(Planner, SinglePeriodConsumesEverything)
{
    PlannerInputs in = flat_inputs(1, 8.0, 2.0);
    in.labor = {3};
    in.pop = {5};
    in.delta_daily = 1;
    in.terminal_capital = 0;
    const PlannerSolution sol = solve(in);
    const double Y0 = 2.0 * std::pow(8.0, 0.3) * std::pow(3.0, 0.7);
    ASSERT_EQ(sol.consumption.size(), 1u);
    EXPECT_TRUE(rel_near(sol.consumption[0], Y0, 1e-12));
    EXPECT_TRUE(rel_near(sol.welfare, 5 * std::log(Y0 / 5), 1e-12));
}

TEST(Planner, BudgetIdentityAndEulerResiduals)
{
    const PlannerInputs in = irregular_inputs(500, 1);
    const PlannerSolution sol = solve(in);
    ASSERT_EQ(sol.capital.size(), in.horizon() + 1);
    ASSERT_EQ(sol.euler_residuals.size(), in.horizon() - 1);
    for (std::size_t t = 0; t < in.horizon(); ++t) {
        const double Y = (1 - in.shortfall[t]) * in.tfp[t] * std::pow(sol.capital[t], 0.3) *
                         std::pow(in.labor[t], 0.7);
        const double gap = sol.capital[t + 1] - (1 - in.delta_daily) * sol.capital[t] - Y + sol.consumption[t] +
                           in.hcost[t];
        ASSERT_LE(std::abs(gap), 1e-13 * sol.capital[t]) << t;
        ASSERT_GT(sol.consumption[t], 0);
    }
    for (std::size_t t = 0; t + 1 < in.horizon(); ++t) {
        EXPECT_LT(euler_residual(sol, in, t), 1e-6) << t;
        EXPECT_DOUBLE_EQ(sol.euler_residuals[t], euler_residual(sol, in, t));
    }
    EXPECT_TRUE(rel_near(sol.capital.back(), balanced_path_capital(in), 1e-12));
}

TEST(Planner, WelfareDominatesRandomPerturbations)
{
    const PlannerInputs in = irregular_inputs(400, 2);
    const PlannerSolution sol = solve(in);
    std::mt19937_64 rng(99);
    std::uniform_int_distribution<std::size_t> day(0, in.horizon() - 2);
    std::uniform_real_distribution<double> size(-0.05, 0.05);
    int checked = 0;
    while (checked < 100) {
        const std::size_t t = day(rng);
        const std::vector<double> C = perturb(sol, in, t, size(rng));
        if (C[t] <= 0 || C[t + 1] <= 0) {
            continue;
        }
        EXPECT_LE(welfare(C, in.pop, in.beta_daily), sol.welfare + 1e-12 * std::abs(sol.welfare)) << "day " << t;
        ++checked;
    }
}

TEST(Planner, PerturbedPathViolatesEuler)
{
    PlannerInputs in = flat_inputs(100, 0);
    in.K0 = golden_rule_capital(in);
    const PlannerSolution sol = solve(in);
    PlannerSolution bad = sol;
    const std::size_t t = 40;
    bad.consumption = perturb(sol, in, t, 0.01);
    bad.capital[t + 1] = resources(in, t, sol.capital[t]) - bad.consumption[t];
    EXPECT_GT(euler_residual(bad, in, t), 1e-3);
}

TEST(Planner, EulerResidualRejectsBoundary)
{
    PlannerInputs in = flat_inputs(10, 1);
    const PlannerSolution sol = solve(in);
    EXPECT_THROW(euler_residual(sol, in, 9), InvalidArgument);
}

TEST(Planner, HigherTfpRaisesWelfare)
{
    PlannerInputs lo = irregular_inputs(300, 3);
    PlannerInputs hi = lo;
    for (double& a : hi.tfp) {
        a *= 1.05;
    }
    // Same terminal requirement so only productivity differs.
    lo.terminal_capital = hi.terminal_capital = balanced_path_capital(lo);
    EXPECT_GE(solve(hi).welfare, solve(lo).welfare);
}

TEST(Planner, InfeasibleReportsFirstDay)
{
    PlannerInputs in = flat_inputs(50, 1);
    in.hcost[17] = 1e6;
    try {
        solve(in);
        FAIL() << "expected Infeasible";
    }
    catch (const Infeasible& e) {
        EXPECT_EQ(e.day(), 17u);
    }
}

TEST(Welfare, Examples)
{
    const std::vector<double> N{3, 4, 5};
    EXPECT_EQ(welfare(N, N, 0.9), 0);
    const double e = std::exp(1.0);
    EXPECT_DOUBLE_EQ(welfare(std::vector<double>{e, e}, std::vector<double>{1, 1}, 1.0), 2);
    EXPECT_THROW(welfare(std::vector<double>{1, 0}, std::vector<double>{1, 1}, 0.9), InvalidArgument);
}

TEST(Planner, ValidatesInputs)
{
    PlannerInputs in = flat_inputs(10, 1);
    in.beta_daily = 1;
    EXPECT_THROW(solve(in), InvalidArgument);
    in = flat_inputs(10, 1);
    in.tfp.pop_back();
    EXPECT_THROW(solve(in), InvalidArgument);
    in = flat_inputs(10, 0);
    EXPECT_THROW(solve(in), InvalidArgument);
}
