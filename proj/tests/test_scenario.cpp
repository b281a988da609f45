#include "epigrowth/data_io.hpp"
#include "epigrowth/scenario.hpp"

#include "test_util.hpp"

#include <gtest/gtest.h>

using namespace epigrowth;
using epigrowth::test::rel_near;

namespace
{

const ModelParams& params()
{
    static const ModelParams p;
    return p;
}

const Trajectory& no_pandemic()
{
    static const Trajectory t = run_scenario(no_pandemic_scenario(), params());
    return t;
}

const Trajectory& no_intervention()
{
    static const Trajectory t = run_scenario(no_intervention_scenario(), params());
    return t;
}

void expect_same_epidemic(const Trajectory& a, const Trajectory& b)
{
    ASSERT_EQ(a.dates, b.dates);
    EXPECT_EQ(a.N, b.N);
    EXPECT_EQ(a.S, b.S);
    EXPECT_EQ(a.I, b.I);
    EXPECT_EQ(a.R, b.R);
    EXPECT_EQ(a.D, b.D);
    EXPECT_EQ(a.A, b.A);
    EXPECT_EQ(a.H, b.H);
    EXPECT_EQ(a.p, b.p);
}

// Daily infection rate recovered from the hospital cost column.
double implied_b(const Trajectory& t, std::size_t i)
{
    return t.H[i] / (params().u * params().h * t.S[i] * t.I[i]);
}

} // namespace

TEST(Scenario, Validation)
{
    Scenario s = no_intervention_scenario();
    s.I0 = -1;
    EXPECT_THROW(run_scenario(s, params()), InvalidArgument);
    s = no_intervention_scenario();
    s.end_of_interest = s.horizon + 1;
    EXPECT_THROW(run_scenario(s, params()), InvalidArgument);
    s = no_intervention_scenario();
    s.schedule = PolicySchedule{Date(2020, 3, 12), 1.5, 10};
    EXPECT_THROW(run_scenario(s, params()), InvalidArgument);
}

TEST(Scenario, NoPandemicHasNoEpidemic)
{
    const Trajectory& t = no_pandemic();
    EXPECT_EQ(t.dates.front(), Date(2019, 1, 1));
    EXPECT_EQ(t.dates.back(), Date(2030, 12, 31));
    for (std::size_t i = 0; i < t.size(); ++i) {
        ASSERT_EQ(t.I[i], 0);
        ASSERT_EQ(t.D[i], 0);
    }
    EXPECT_GT(t.Y[*t.index_of(Date(2030, 12, 31))], t.Y[*t.index_of(Date(2020, 12, 31))]);
}

TEST(Scenario, NoInterventionHeadlineBands)
{
    const SummaryMetrics m = summarize(no_intervention(), no_pandemic(), std::vector<Date>{Date(2030, 12, 31)});
    EXPECT_TRUE(rel_near(m.total_deaths, 1.75e9, 0.15));
    EXPECT_LE(std::abs(m.peak_date - Date(2020, 6, 15)), 21);
    EXPECT_GE(m.max_output_drop_pct, 35);
    EXPECT_LE(m.max_output_drop_pct, 55);
    ASSERT_TRUE(m.output_ratio(Date(2030, 12, 31)));
    EXPECT_GE(*m.output_ratio(Date(2030, 12, 31)), 0.70);
    EXPECT_LE(*m.output_ratio(Date(2030, 12, 31)), 0.85);
}

TEST(Scenario, ConservationAndBudgetIdentity)
{
    for (const Trajectory* t : {&no_pandemic(), &no_intervention()}) {
        const double unassigned0 = t->epi_state(0).unassigned();
        const double d = params().delta_daily;
        for (std::size_t i = 0; i < t->size(); ++i) {
            ASSERT_NEAR(t->epi_state(i).unassigned(), unassigned0, 1e-6 * t->N[i]) << i;
            ASSERT_GE(t->S[i], 0);
            ASSERT_GE(t->I[i], 0);
            if (i > 0) {
                ASSERT_GE(t->D[i], t->D[i - 1]);
                ASSERT_GE(t->R[i], t->R[i - 1]);
            }
            if (i + 1 < t->size()) {
                const double next = (1 - d) * t->K[i] + t->Y[i] - t->C[i] - t->H[i];
                ASSERT_NEAR(t->K[i + 1], next, 1e-6 * t->K[i + 1]) << i;
            }
        }
    }
}

TEST(Scenario, EulerResidualsFromRows)
{
    const Trajectory& t = no_intervention();
    PlannerInputs in;
    in.beta_daily = params().beta_daily;
    in.alpha = params().alpha;
    in.delta_daily = params().delta_daily;
    in.K0 = t.K.front();
    PlannerSolution sol;
    for (std::size_t i = 0; i < t.size(); ++i) {
        in.labor.push_back(t.S[i] + t.R[i]);
        in.pop.push_back(t.N[i]);
        in.tfp.push_back(t.A[i]);
        in.hcost.push_back(t.H[i]);
        in.shortfall.push_back(t.p[i]);
        sol.consumption.push_back(t.C[i]);
        sol.capital.push_back(t.K[i]);
    }
    sol.capital.push_back(t.K.back());
    double worst = 0;
    for (std::size_t i = 0; i + 1 < t.size(); ++i) {
        worst = std::max(worst, euler_residual(sol, in, i));
    }
    EXPECT_LT(worst, 1e-6);
}

TEST(Scenario, PolicyNoOpIsExact)
{
    for (const PolicySchedule& sched :
         {PolicySchedule{Date(2020, 3, 12), 0.0, 182}, PolicySchedule{Date(2020, 3, 12), 0.1, 0}}) {
        Scenario s = no_intervention_scenario();
        s.schedule = sched;
        EXPECT_EQ(run_scenario(s, params()), no_intervention());
    }
}

TEST(Scenario, EconomyDoesNotFeedBackIntoEpidemic)
{
    ModelParams other = params();
    other.beta_daily = daily_discount_factor(0.03);
    expect_same_epidemic(run_scenario(no_intervention_scenario(), other), no_intervention());

    Scenario s = no_intervention_scenario();
    s.K0 *= 1.2;
    const Trajectory richer = run_scenario(s, params());
    expect_same_epidemic(richer, no_intervention());
    EXPECT_NE(richer.K, no_intervention().K);
}

TEST(Scenario, HorizonTruncationBarelyMovesConsumption)
{
    Scenario longer = no_intervention_scenario();
    longer.horizon = Date(2070, 12, 31);
    const Trajectory t = run_scenario(longer, params());
    const std::size_t last = *t.index_of(Date(2030, 12, 31));
    EXPECT_TRUE(rel_near(t.C[last], no_intervention().C[last], 1e-3));
}

TEST(Scenario, FingerprintTracksParameters)
{
    ModelParams other = params();
    EXPECT_EQ(params_fingerprint(other), no_intervention().params_hash);
    other.u += 1;
    EXPECT_NE(params_fingerprint(other), no_intervention().params_hash);
    EXPECT_EQ(no_intervention().params_hash.size(), 16u);
}

TEST(Summarize, AgainstItself)
{
    const SummaryMetrics m = summarize(no_intervention(), no_intervention());
    EXPECT_EQ(m.max_output_drop_pct, 0);
    ASSERT_EQ(m.output_ratio_at.size(), 1u);
    EXPECT_EQ(m.output_ratio_at[0].first, no_intervention().dates.back());
    EXPECT_EQ(m.output_ratio_at[0].second, 1);
    EXPECT_EQ(m.total_deaths, no_intervention().D.back() - no_intervention().D.front());
    EXPECT_EQ(m.welfare, no_intervention().welfare);
}

TEST(Summarize, MisalignedReference)
{
    EXPECT_THROW(summarize(no_pandemic(), no_intervention()), InvalidArgument);
    EXPECT_THROW(summarize(no_intervention(), no_pandemic(), std::vector<Date>{Date(2040, 1, 1)}), InvalidArgument);
}

TEST(Policy, FivePercentCutsTransmissionByAboutFiftyEightPercent)
{
    Scenario s = no_intervention_scenario();
    s.schedule = PolicySchedule{Date(2020, 3, 12), 0.05, 30};
    const Trajectory t = run_scenario(s, params());
    const std::size_t on = *t.index_of(Date(2020, 3, 20));
    const std::size_t off = *t.index_of(Date(2020, 3, 1));
    EXPECT_EQ(t.p[on], 0.05);
    EXPECT_EQ(t.p[off], 0);
    EXPECT_TRUE(rel_near(implied_b(t, off), params().b0, 1e-9));
    EXPECT_NEAR(1 - implied_b(t, on) / params().b0, 0.58, 0.01);
}

TEST(Policy, LateStartLeavesEarlierDaysUntouched)
{
    Scenario s = no_intervention_scenario();
    s.schedule = PolicySchedule{Date(2020, 7, 2), 0.10, 182};
    const Trajectory t = run_scenario(s, params());
    const std::size_t cut = *t.index_of(Date(2020, 7, 2));
    for (std::size_t i = 0; i <= cut; ++i) {
        ASSERT_EQ(t.I[i], no_intervention().I[i]);
        ASSERT_EQ(t.D[i], no_intervention().D[i]);
    }
    EXPECT_NE(t.I[cut + 1], no_intervention().I[cut + 1]);
}

TEST(Policy, StartAfterEpidemicEndsChangesNothingMaterial)
{
    Scenario s = no_intervention_scenario();
    s.schedule = PolicySchedule{Date(2029, 1, 1), 0.10, 182};
    const Trajectory t = run_scenario(s, params());
    EXPECT_TRUE(rel_near(t.D.back(), no_intervention().D.back(), 1e-6));
    EXPECT_LT(t.Y[*t.index_of(Date(2029, 2, 1))], no_intervention().Y[*t.index_of(Date(2029, 2, 1))]);
}

TEST(Sweep, KeysOrderAndErrorsPerRun)
{
    SweepSetup setup;
    setup.reference = no_pandemic();
    const std::vector<Date> dates{Date(2020, 5, 21), Date(2019, 6, 1), Date(2020, 4, 9)};
    const auto runs = sweep_start_dates(params(), dates, setup);
    ASSERT_EQ(runs.size(), 3u);
    EXPECT_EQ(runs[0].key, "start-2020-05-21");
    EXPECT_EQ(runs[2].key, "start-2020-04-09");
    EXPECT_TRUE(runs[0].metrics && runs[0].error.empty());
    EXPECT_FALSE(runs[1].trajectory);
    EXPECT_NE(runs[1].error.find("2019-06-01"), std::string::npos);
    EXPECT_TRUE(runs[2].metrics);
}

TEST(Sweep, ParallelMatchesSerialByteForByte)
{
    SweepSetup setup;
    setup.reference = no_pandemic();
    const std::vector<double> p{0.05, 0.15, 0.25};
    const auto par = sweep_intensity(params(), p, setup);
    setup.parallel = false;
    const auto ser = sweep_intensity(params(), p, setup);
    ASSERT_EQ(par.size(), ser.size());
    for (std::size_t k = 0; k < par.size(); ++k) {
        ASSERT_TRUE(par[k].trajectory && ser[k].trajectory);
        EXPECT_EQ(par[k].key, ser[k].key);
        EXPECT_EQ(trajectory_to_csv(*par[k].trajectory), trajectory_to_csv(*ser[k].trajectory));
    }
    EXPECT_EQ(par[0].key, "intensity-5pct");
}

TEST(Sweep, SuppressionThroughoutGivesTheLowestPeak)
{
    SweepSetup setup;
    setup.reference = no_pandemic();
    const std::vector<int> weeks{4, 28, 52, 520};
    const auto runs = sweep_duration(params(), weeks, setup);
    for (const SweepRun& r : runs) {
        ASSERT_TRUE(r.metrics) << r.error;
    }
    for (std::size_t k = 0; k + 1 < runs.size(); ++k) {
        EXPECT_LT(runs.back().metrics->peak_active_infections, runs[k].metrics->peak_active_infections) << runs[k].key;
    }
    EXPECT_EQ(runs.back().key, "duration-520w");
}
