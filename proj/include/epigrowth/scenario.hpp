#pragma once

#include "epigrowth/date.hpp"
#include "epigrowth/economy.hpp"
#include "epigrowth/epidemic.hpp"
#include "epigrowth/error.hpp"
#include "epigrowth/params.hpp"
#include "epigrowth/planner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <future>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace epigrowth
{

/// A GDP shortfall `intensity_p` held on [start, start + duration_days).
struct PolicySchedule {
    Date start;
    double intensity_p = 0;
    long duration_days = 0;

    bool active(const Date& d) const
    {
        return d >= start && d - start < duration_days;
    }

    bool operator==(const PolicySchedule&) const = default;
};

inline void validate(const PolicySchedule& s)
{
    if (!(s.intensity_p >= 0 && s.intensity_p < 1)) {
        throw InvalidArgument("policy intensity must lie in [0, 1)");
    }
    if (s.duration_days < 0) {
        throw InvalidArgument("policy duration must be non-negative");
    }
}

/// Initial conditions, policy and time window of one simulation.
struct Scenario {
    std::string name;
    Date start_date;
    double N0 = 0;
    double I0 = 0;
    double R0 = 0;
    double D0 = 0;
    double b0 = 0;
    double A0 = 1;
    double K0 = 0;
    std::optional<PolicySchedule> schedule;
    Date end_of_interest{2030, 12, 31};
    Date horizon{2060, 12, 31};

    bool operator==(const Scenario&) const = default;
};

inline void validate(const Scenario& s)
{
    if (!(s.N0 > 0) || !(s.I0 >= 0) || !(s.R0 >= 0) || !(s.D0 >= 0) || !(s.I0 + s.R0 <= s.N0)) {
        throw InvalidArgument("scenario '" + s.name + "': initial compartments are inconsistent");
    }
    if (!(s.b0 >= 0) || !(s.A0 > 0) || !(s.K0 > 0)) {
        throw InvalidArgument("scenario '" + s.name + "': b0 >= 0, A0 > 0 and K0 > 0 are required");
    }
    if (!(s.end_of_interest >= s.start_date) || !(s.horizon > s.end_of_interest)) {
        throw InvalidArgument("scenario '" + s.name + "': need start <= end of interest < horizon");
    }
    if (s.schedule) {
        validate(*s.schedule);
    }
}

/// Baseline without a pandemic, starting 2019-01-01.
inline Scenario no_pandemic_scenario()
{
    Scenario s;
    s.name = "no-pandemic";
    s.start_date = Date(2019, 1, 1);
    s.N0 = 7.634e9;
    s.A0 = 1.880;
    s.K0 = 2.775e14;
    return s;
}

/// Unmitigated pandemic from the first JHU report, 2020-01-22.
inline Scenario no_intervention_scenario()
{
    Scenario s;
    s.name = "no-intervention";
    s.start_date = Date(2020, 1, 22);
    s.N0 = 7.718e9;
    s.I0 = 510;
    s.R0 = 28;
    s.D0 = 17;
    s.b0 = 2.041e-11;
    s.A0 = 1.906;
    s.K0 = 2.827e14;
    return s;
}

/// Daily columns from the scenario start to its end of interest. Row t holds
/// the state at the start of day t and the flows (Y, C, H) during it, so
/// K[t+1] = (1 - delta) K[t] + Y[t] - C[t] - H[t].
struct Trajectory {
    std::string scenario;
    std::string params_hash;
    double welfare = 0; // over the full solver horizon
    std::vector<Date> dates;
    std::vector<double> N, S, I, R, D, A, K, Y, C, H, p;

    std::size_t size() const
    {
        return dates.size();
    }

    EpiState epi_state(std::size_t t) const
    {
        return {dates[t], N[t], S[t], I[t], R[t], D[t]};
    }
    EconState econ_state(std::size_t t) const
    {
        return {A[t], K[t]};
    }

    /// Row index of `d`, if inside the trajectory.
    std::optional<std::size_t> index_of(const Date& d) const
    {
        if (dates.empty() || d < dates.front() || d > dates.back()) {
            return std::nullopt;
        }
        return std::size_t(d - dates.front());
    }

    bool operator==(const Trajectory&) const = default;
};

/// FNV-1a over the full-precision parameter values.
inline std::string params_fingerprint(const ModelParams& p)
{
    const double fields[] = {p.a1, p.a2, p.delta_daily, p.alpha, p.g_daily, p.beta_daily, p.u,
                             p.h,  p.r,  p.b0,          p.log_k1, p.k2,     p.log_q1,     p.q2};
    std::uint64_t hash = 14695981039346656037ull;
    char buf[40];
    for (double v : fields) {
        const int n = std::snprintf(buf, sizeof(buf), "%.17g;", v);
        for (int i = 0; i < n; ++i) {
            hash ^= std::uint8_t(buf[i]);
            hash *= 1099511628211ull;
        }
    }
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash));
    return buf;
}

/**
 * @brief Simulates one scenario in two passes.
 *
 * The epidemic does not depend on consumption, so it is iterated forward to
 * the horizon first; the planner then chooses consumption against the
 * resulting labour, population, hospital-cost and shortfall paths.
 */
inline Trajectory run_scenario(const Scenario& sc, const ModelParams& params, const PlannerOptions& opt = {})
{
    validate(sc);
    validate(params);
    const std::size_t T = std::size_t(sc.horizon - sc.start_date);
    const std::size_t keep = std::size_t(sc.end_of_interest - sc.start_date) + 1;
    const PopGrowthParams pop = params.population();
    const MortalityModel mm = params.mortality();
    const TradeoffModel tradeoff = params.tradeoff();

    PlannerInputs in;
    in.labor.resize(T);
    in.pop.resize(T);
    in.tfp.resize(T);
    in.hcost.resize(T);
    in.shortfall.resize(T);
    in.K0 = sc.K0;
    in.beta_daily = params.beta_daily;
    in.alpha = params.alpha;
    in.delta_daily = params.delta_daily;

    Trajectory out;
    out.scenario = sc.name;
    out.params_hash = params_fingerprint(params);
    out.dates.reserve(keep);

    EpiState state{sc.start_date, sc.N0, sc.N0 - sc.I0 - sc.R0, sc.I0, sc.R0, sc.D0};
    double A = sc.A0;
    for (std::size_t t = 0; t < T; ++t) {
        const bool active = sc.schedule && sc.schedule->active(state.date);
        const double p = active ? sc.schedule->intensity_p : 0.0;
        const double reduction = policy_to_infection_reduction(100 * p, tradeoff);
        const EpiRates rates = effective_rates(sc.b0, reduction, mm, params.r);

        in.labor[t] = state.S + state.R;
        in.pop[t] = state.N;
        in.tfp[t] = A;
        in.hcost[t] = hospital_cost(params.u, params.h, rates.b, state.S, state.I);
        in.shortfall[t] = p;

        if (t < keep) {
            out.dates.push_back(state.date);
            out.N.push_back(state.N);
            out.S.push_back(state.S);
            out.I.push_back(state.I);
            out.R.push_back(state.R);
            out.D.push_back(state.D);
            out.A.push_back(A);
            out.H.push_back(in.hcost[t]);
            out.p.push_back(p);
        }
        state = epi_step(state, rates, pop);
        A = tfp_step(A, params.g_daily);
    }

    PlannerSolution sol;
    try {
        sol = solve(in, opt);
    }
    catch (const Infeasible& e) {
        throw Infeasible("scenario '" + sc.name + "' infeasible from " + (sc.start_date + long(e.day())).to_string() +
                             ": " + e.what(),
                         e.day());
    }
    out.welfare = sol.welfare;
    for (std::size_t t = 0; t < keep; ++t) {
        out.K.push_back(sol.capital[t]);
        out.C.push_back(sol.consumption[t]);
        out.Y.push_back(production(in.tfp[t], sol.capital[t], in.labor[t], in.shortfall[t], params.alpha));
    }
    return out;
}

/// Runs both baselines: {no pandemic, no intervention}.
inline std::pair<Trajectory, Trajectory> run_baselines(const ModelParams& params, const PlannerOptions& opt = {})
{
    return {run_scenario(no_pandemic_scenario(), params, opt), run_scenario(no_intervention_scenario(), params, opt)};
}

// ---------------------------------------------------------------------------
// Metrics

struct SummaryMetrics {
    double peak_active_infections = 0;
    Date peak_date;
    double total_deaths = 0;
    double max_output_drop_pct = 0; // vs the reference, percent
    Date max_output_drop_date;
    /// Y / Y_reference on selected dates (1 = equal).
    std::vector<std::pair<Date, double>> output_ratio_at;
    double welfare = 0;

    std::optional<double> output_ratio(const Date& d) const
    {
        for (const auto& [date, ratio] : output_ratio_at) {
            if (date == d) {
                return ratio;
            }
        }
        return std::nullopt;
    }
};

/// Metrics of `traj` with output compared against `reference` on the same
/// dates. `ratio_dates` defaults to the last date of `traj`.
inline SummaryMetrics summarize(const Trajectory& traj, const Trajectory& reference,
                                std::span<const Date> ratio_dates = {})
{
    if (traj.size() == 0) {
        throw InvalidArgument("cannot summarise an empty trajectory");
    }
    const auto offset = reference.index_of(traj.dates.front());
    if (!offset || !reference.index_of(traj.dates.back())) {
        throw InvalidArgument("trajectory '" + traj.scenario + "' (" + traj.dates.front().to_string() + " to " +
                              traj.dates.back().to_string() + ") is not covered by reference '" +
                              reference.scenario + "'");
    }
    SummaryMetrics m;
    const auto peak = std::max_element(traj.I.begin(), traj.I.end());
    m.peak_active_infections = *peak;
    m.peak_date = traj.dates[std::size_t(peak - traj.I.begin())];
    m.total_deaths = traj.D.back() - traj.D.front();
    m.max_output_drop_pct = -std::numeric_limits<double>::infinity();
    for (std::size_t t = 0; t < traj.size(); ++t) {
        const double drop = 100 * (1 - traj.Y[t] / reference.Y[*offset + t]);
        if (drop > m.max_output_drop_pct) {
            m.max_output_drop_pct = drop;
            m.max_output_drop_date = traj.dates[t];
        }
    }
    std::vector<Date> dates(ratio_dates.begin(), ratio_dates.end());
    if (dates.empty()) {
        dates.push_back(traj.dates.back());
    }
    for (const Date& d : dates) {
        const auto t = traj.index_of(d);
        if (!t) {
            throw InvalidArgument("ratio date " + d.to_string() + " outside trajectory '" + traj.scenario + "'");
        }
        m.output_ratio_at.emplace_back(d, traj.Y[*t] / reference.Y[*offset + *t]);
    }
    m.welfare = traj.welfare;
    return m;
}

// ---------------------------------------------------------------------------
// Policy sweeps

struct SweepRun {
    std::string key;
    Scenario scenario;
    std::optional<Trajectory> trajectory;
    std::optional<SummaryMetrics> metrics;
    std::string error; // non-empty when the run failed
};

/// Fixed settings shared by the three policy experiments.
struct SweepSetup {
    Scenario base = no_intervention_scenario();
    Date start{2020, 3, 12};
    double intensity = 0.10;
    long duration_days = 26 * 7;
    /// No-pandemic reference for output ratios; computed when empty.
    std::optional<Trajectory> reference;
    std::vector<Date> ratio_dates;
    bool parallel = true;
    PlannerOptions planner;
};

namespace detail
{

inline std::vector<SweepRun> run_sweep(const ModelParams& params, std::vector<SweepRun> runs, const SweepSetup& setup)
{
    const Trajectory reference = setup.reference ? *setup.reference : run_scenario(no_pandemic_scenario(), params, setup.planner);
    auto execute = [&](SweepRun& run) {
        try {
            if (run.scenario.schedule) {
                const Date s = run.scenario.schedule->start;
                if (s < run.scenario.start_date || s >= run.scenario.horizon) {
                    throw InvalidArgument("policy start " + s.to_string() + " outside the simulation window");
                }
            }
            run.trajectory = run_scenario(run.scenario, params, setup.planner);
            run.metrics = summarize(*run.trajectory, reference, setup.ratio_dates);
        }
        catch (const std::exception& e) {
            run.error = e.what();
            run.trajectory.reset();
            run.metrics.reset();
        }
    };
    if (setup.parallel && runs.size() > 1) {
        std::vector<std::future<void>> jobs;
        jobs.reserve(runs.size());
        for (SweepRun& run : runs) {
            jobs.push_back(std::async(std::launch::async, [&execute, &run] {
                execute(run);
            }));
        }
        for (auto& job : jobs) {
            job.get();
        }
    }
    else {
        for (SweepRun& run : runs) {
            execute(run);
        }
    }
    return runs;
}

inline std::string percent_label(double fraction)
{
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", 100 * fraction);
    return buf;
}

} // namespace detail

/// "When?": varies the start date at fixed intensity and duration.
inline std::vector<SweepRun> sweep_start_dates(const ModelParams& params, std::span<const Date> dates,
                                               const SweepSetup& setup = {})
{
    std::vector<SweepRun> runs;
    for (const Date& d : dates) {
        SweepRun run;
        run.key = "start-" + d.to_string();
        run.scenario = setup.base;
        run.scenario.name = run.key;
        run.scenario.schedule = PolicySchedule{d, setup.intensity, setup.duration_days};
        runs.push_back(std::move(run));
    }
    return detail::run_sweep(params, std::move(runs), setup);
}

/// "How much?": varies the GDP shortfall (fractions, e.g. 0.05).
inline std::vector<SweepRun> sweep_intensity(const ModelParams& params, std::span<const double> intensities,
                                             const SweepSetup& setup = {})
{
    std::vector<SweepRun> runs;
    for (double p : intensities) {
        SweepRun run;
        run.key = "intensity-" + detail::percent_label(p) + "pct";
        run.scenario = setup.base;
        run.scenario.name = run.key;
        run.scenario.schedule = PolicySchedule{setup.start, p, setup.duration_days};
        runs.push_back(std::move(run));
    }
    return detail::run_sweep(params, std::move(runs), setup);
}

/// "For how long?": varies the duration in weeks.
inline std::vector<SweepRun> sweep_duration(const ModelParams& params, std::span<const int> durations_weeks,
                                            const SweepSetup& setup = {})
{
    std::vector<SweepRun> runs;
    for (int weeks : durations_weeks) {
        SweepRun run;
        run.key = "duration-" + std::to_string(weeks) + "w";
        run.scenario = setup.base;
        run.scenario.name = run.key;
        run.scenario.schedule = PolicySchedule{setup.start, setup.intensity, 7L * weeks};
        runs.push_back(std::move(run));
    }
    return detail::run_sweep(params, std::move(runs), setup);
}

} // namespace epigrowth
