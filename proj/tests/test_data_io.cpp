#include "epigrowth/data_io.hpp"

#include "test_util.hpp"

#include <gtest/gtest.h>

#include <numeric>
#include <sstream>

using namespace epigrowth;
using epigrowth::test::rel_near;
using epigrowth::test::source_dir;
using epigrowth::test::TempDir;

namespace
{

DatasetManifest annual(const fs::path& p, const std::string& units = "persons")
{
    DatasetManifest m;
    m.path = p;
    m.kind = DatasetKind::population;
    m.units = units;
    return m;
}

DatasetManifest cases(const fs::path& p)
{
    DatasetManifest m;
    m.path = p;
    m.kind = DatasetKind::cases;
    m.units = "persons";
    return m;
}

DatasetManifest fixture(DatasetKind kind)
{
    for (const auto& m : load_dataset_index(source_dir() / "data" / "datasets.json")) {
        if (m.kind == kind) {
            return m;
        }
    }
    throw std::runtime_error("fixture missing");
}

double sum(const std::vector<double>& v)
{
    return std::accumulate(v.begin(), v.end(), 0.0);
}

Trajectory small_trajectory(std::size_t n)
{
    Trajectory t;
    t.scenario = "toy";
    for (std::size_t i = 0; i < n; ++i) {
        const double x = 0.1 + double(i) / 3;
        t.dates.push_back(Date(2020, 1, 1) + long(i));
        for (const auto& c : trajectory_columns()) {
            if (c != "date") {
                trajectory_column(t, c)->push_back(x * (1 + c[0]) * 1e7 + 1.0 / 7);
            }
        }
    }
    return t;
}

} // namespace

TEST(AnnualSeries, LongTableTwoRows)
{
    TempDir dir;
    write_file_atomic(dir / "pop.csv", "year,value\n2001,2.5\n2000,2\n");
    const AnnualSeries s = load_annual_series(annual(dir / "pop.csv", "billions"));
    EXPECT_EQ(s.years, (std::vector<int>{2000, 2001}));
    EXPECT_EQ(s.values, (std::vector<double>{2e9, 2.5e9}));
}

TEST(AnnualSeries, DuplicateYearNamesTheYear)
{
    TempDir dir;
    write_file_atomic(dir / "pop.csv", "year,value\n2000,1\n2001,2\n2001,3\n");
    try {
        load_annual_series(annual(dir / "pop.csv"));
        FAIL() << "expected DataError";
    }
    catch (const DataError& e) {
        EXPECT_NE(std::string(e.what()).find("2001"), std::string::npos) << e.what();
        EXPECT_EQ(e.row(), 4u);
    }
}

TEST(AnnualSeries, GapsAndBadCells)
{
    TempDir dir;
    write_file_atomic(dir / "gap.csv", "year,value\n2000,1\n2002,2\n");
    EXPECT_THROW(load_annual_series(annual(dir / "gap.csv")), DataError);
    write_file_atomic(dir / "bad.csv", "year,value\n2000,1\n2001,n/a\n");
    EXPECT_THROW(load_annual_series(annual(dir / "bad.csv")), DataError);
    write_file_atomic(dir / "empty.csv", "");
    EXPECT_THROW(load_annual_series(annual(dir / "empty.csv")), DataError);
    EXPECT_THROW(load_annual_series(annual(dir / "none.csv")), IoError);
}

TEST(AnnualSeries, ColumnMappingAndUnits)
{
    TempDir dir;
    write_file_atomic(dir / "g.csv", "Year,GDP (bn)\n1999,10\n2000,11\n");
    DatasetManifest m = annual(dir / "g.csv", "billion-usd");
    m.kind = DatasetKind::gdp;
    m.columns = {{"year", "Year"}, {"value", "GDP (bn)"}};
    EXPECT_EQ(load_annual_series(m).values, (std::vector<double>{1e10, 1.1e10}));
    m.units = "persons";
    EXPECT_THROW(load_annual_series(m), InvalidArgument);
    m.units = "usd";
    m.columns = {{"confirmed", "x"}};
    EXPECT_THROW(validate(m), InvalidArgument);
}

TEST(AnnualSeries, WorldBankFixturesMatchIndependentChecksums)
{
    const AnnualSeries pop = load_annual_series(fixture(DatasetKind::population));
    EXPECT_EQ(pop.first_year(), 1960);
    EXPECT_EQ(pop.last_year(), 2018);
    EXPECT_EQ(pop.at(1990), 5280000000.0);
    EXPECT_EQ(sum(pop.values), 307838000000.0);

    const AnnualSeries gdp = load_annual_series(fixture(DatasetKind::gdp));
    EXPECT_EQ(gdp.first_year(), 1990);
    EXPECT_EQ(gdp.values.back(), 115664687503474.0);
    EXPECT_TRUE(rel_near(sum(gdp.values), 2135899720263411.0, 1e-15));

    const AnnualSeries gcf = load_annual_series(fixture(DatasetKind::gcf));
    EXPECT_EQ(gcf.size(), 49u);
    EXPECT_EQ(gcf.at(1970), 4836734967590.0);
    EXPECT_TRUE(rel_near(sum(gcf.values), 531111770716470.0, 1e-15));
}

TEST(AnnualSeries, WorldBankMissingCountry)
{
    DatasetManifest m = fixture(DatasetKind::population);
    m.country_code = "XYZ";
    EXPECT_THROW(load_annual_series(m), DataError);
}

TEST(CaseSeries, RepairsDownwardRevisionsAndLogs)
{
    TempDir dir;
    write_file_atomic(dir / "c.csv", "date,confirmed,recovered,deaths\n"
                                     "2020-03-01,100,10,1\n2020-03-02,120,9,2\n2020-03-03,130,12,3\n");
    std::ostringstream log;
    CaseLoadReport rep;
    const CaseSeries s = load_case_series(cases(dir / "c.csv"), &rep, &log);
    EXPECT_EQ(s.recovered, (std::vector<double>{10, 10, 12}));
    EXPECT_EQ(s.confirmed, (std::vector<double>{100, 120, 130}));
    EXPECT_EQ(rep.repaired_cells, 1u);
    EXPECT_EQ(rep.repaired_lines, (std::vector<std::size_t>{3}));
    EXPECT_NE(log.str().find("repaired 1"), std::string::npos) << log.str();
}

TEST(CaseSeries, Errors)
{
    TempDir dir;
    write_file_atomic(dir / "empty.csv", "");
    EXPECT_THROW(load_case_series(cases(dir / "empty.csv")), DataError);
    write_file_atomic(dir / "skip.csv", "date,confirmed,recovered,deaths\n2020-03-01,1,0,0\n2020-03-03,2,0,0\n");
    EXPECT_THROW(load_case_series(cases(dir / "skip.csv")), DataError);
    write_file_atomic(dir / "date.csv", "date,confirmed,recovered,deaths\n03/01/2020,1,0,0\n");
    EXPECT_THROW(load_case_series(cases(dir / "date.csv")), DataError);
    write_file_atomic(dir / "col.csv", "date,confirmed,deaths\n2020-03-01,1,0\n");
    EXPECT_THROW(load_case_series(cases(dir / "col.csv")), DataError);
}

TEST(CaseSeries, JhuFixtureActiveCases)
{
    std::ostringstream log;
    const CaseSeries s = load_case_series(fixture(DatasetKind::cases), nullptr, &log);
    ASSERT_EQ(s.size(), 106u);
    EXPECT_EQ(s.dates.front(), Date(2020, 1, 22));
    EXPECT_EQ(s.dates.back(), Date(2020, 5, 6));
    // confirmed - recovered - deaths, read off the file by hand
    EXPECT_EQ(s.active(0), 510);
    EXPECT_EQ(s.active(std::size_t(Date(2020, 3, 1) - Date(2020, 1, 22))), 42657);
    EXPECT_EQ(s.active(std::size_t(Date(2020, 4, 10) - Date(2020, 1, 22))), 1213098);
    EXPECT_EQ(s.active(105), 3755341 - 263831 - 1245413);
}

TEST(TradeoffPanel, Fixture)
{
    const TradeoffPanel p = load_tradeoff_panel(fixture(DatasetKind::tradeoff_panel));
    ASSERT_EQ(p.country.size(), 45u);
    EXPECT_EQ(p.country.front(), "S01");
    EXPECT_EQ(p.week.front(), Date(2020, 3, 16));
    EXPECT_EQ(p.gdp_shortfall_pct[1], 4.50);
    EXPECT_EQ(p.infection_reduction_pct[0], 52.557439);
}

TEST(DatasetIndex, RejectsUnknownKeysAndKinds)
{
    TempDir dir;
    write_file_atomic(dir / "datasets.json", R"({"datasets":[{"kind":"population","path":"p.csv","unit":"persons"}]})");
    EXPECT_THROW(load_dataset_index(dir / "datasets.json"), ConfigError);
    write_file_atomic(dir / "datasets.json", R"({"datasets":[{"kind":"weather","path":"p.csv","units":"persons"}]})");
    EXPECT_THROW(load_dataset_index(dir / "datasets.json"), ConfigError);
    write_file_atomic(dir / "datasets.json", R"({"datasets":[{"kind":"population","path":"p.csv","units":"persons"}]})");
    const auto ms = load_dataset_index(dir / "datasets.json");
    ASSERT_EQ(ms.size(), 1u);
    EXPECT_EQ(ms[0].path, dir / "p.csv");
}

TEST(CalibrationData, MissingKindsAreListedTogether)
{
    TempDir dir;
    write_file_atomic(dir / "datasets.json", R"({"datasets":[{"kind":"population","path":"p.csv","units":"persons"}]})");
    try {
        load_calibration_data(dir.path(), nullptr);
        FAIL();
    }
    catch (const InvalidArgument& e) {
        const std::string msg = e.what();
        for (const char* k : {"population", "gdp", "gcf", "cases", "tradeoff-panel"}) {
            EXPECT_NE(msg.find(k), std::string::npos) << k;
        }
    }
}

TEST(TrajectoryCsv, RoundTripIsBitExact)
{
    TempDir dir;
    const Trajectory t = small_trajectory(30);
    write_trajectory(t, dir / "toy.csv");
    Trajectory back = read_trajectory(dir / "toy.csv");
    EXPECT_EQ(back.scenario, "toy");
    back.params_hash = t.params_hash;
    back.welfare = t.welfare;
    EXPECT_EQ(back, t);
}

TEST(TrajectoryCsv, OneDayIsTwoLines)
{
    const std::string text = trajectory_to_csv(small_trajectory(1));
    EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 2);
    EXPECT_EQ(text.substr(0, text.find('\n')), "date,N,S,I,R,D,A,K,Y,C,H,p");
}

TEST(TrajectoryCsv, NoInterventionFinalDeaths)
{
    TempDir dir;
    const Trajectory t = run_scenario(no_intervention_scenario(), ModelParams{});
    write_trajectory(t, dir / "ni.csv");
    const Trajectory back = read_trajectory(dir / "ni.csv");
    EXPECT_EQ(back.D.back(), t.D.back());
    EXPECT_EQ(back.dates.back(), Date(2030, 12, 31));
    EXPECT_TRUE(rel_near(back.D.back() - back.D.front(), 1.75e9, 0.15));
}

TEST(TrajectoryCsv, RejectsBrokenFiles)
{
    TempDir dir;
    write_file_atomic(dir / "a.csv", "date,N\n2020-01-01,1\n");
    EXPECT_THROW(read_trajectory(dir / "a.csv"), DataError);
    std::string text = trajectory_to_csv(small_trajectory(3));
    text.replace(text.find("2020-01-02"), 10, "2020-01-05");
    write_file_atomic(dir / "b.csv", text);
    EXPECT_THROW(read_trajectory(dir / "b.csv"), DataError);
}

TEST(Params, JsonRoundTripAndErrors)
{
    ModelParams p;
    p.g_daily = 1.0 / 3e4;
    p.u = 0.1 + 0.2;
    EXPECT_EQ(params_from_json(params_to_json(p)), p);
    EXPECT_EQ(params_from_json(json::object()), ModelParams{});
    try {
        params_from_json(json{{"detla_daily", 0.1}});
        FAIL();
    }
    catch (const ConfigError& e) {
        EXPECT_NE(std::string(e.what()).find("detla_daily"), std::string::npos);
    }
    EXPECT_THROW(params_from_json(json{{"alpha", "x"}}), ConfigError);
    EXPECT_THROW(params_from_json(json{{"alpha", 1.5}}), ConfigError);
}

TEST(Config, DefaultsFileMatchesBuiltInValues)
{
    const RunConfig c = load_config(source_dir() / "config" / "defaults.json");
    EXPECT_EQ(c, RunConfig{});
    const ModelParams& p = c.params;
    EXPECT_TRUE(rel_near(1 + (p.a1 - 1) * 365, 1.028, 1e-12));
    EXPECT_TRUE(rel_near(p.a2 * 365, -2.282e-12, 1e-12));
    EXPECT_TRUE(rel_near(1 - std::pow(1 - p.delta_daily, 365), 0.0446, 1e-12));
    EXPECT_TRUE(rel_near(std::pow(p.beta_daily, -365) - 1, 0.08, 1e-10));
    EXPECT_EQ(p.alpha, 0.3);
    EXPECT_EQ(p.g_daily, 3.55e-5);
    EXPECT_EQ(p.u, 5722.078);
    EXPECT_EQ(p.h, 0.147);
    EXPECT_EQ(p.r, 0.02099);
    EXPECT_EQ(p.b0, 2.041e-11);
    EXPECT_EQ(p.log_k1, 12.561);
    EXPECT_EQ(p.k2, 0.717);
    EXPECT_EQ(p.log_q1, 3.677);
    EXPECT_EQ(p.q2, 0.238);
    EXPECT_EQ(c.sweeps.start_dates.back(), Date(2020, 7, 2));
    EXPECT_EQ(c.sweeps.intensities_pct, (std::vector<double>{5, 15, 25}));
    EXPECT_EQ(c.sweeps.durations_weeks, (std::vector<int>{4, 28, 52, 76}));
}

TEST(Config, EmptyObjectGivesDefaults)
{
    EXPECT_EQ(config_from_json(json::object()), RunConfig{});
}

TEST(Config, MisspelledKeyIsNamed)
{
    for (const json& j : {json{{"parms", json::object()}}, json{{"sweeps", {{"durations_week", {4}}}}},
                          json{{"scenarios", {{"x", {{"start_dat", "2020-01-01"}}}}}}}) {
        try {
            config_from_json(j);
            FAIL() << j.dump();
        }
        catch (const ConfigError& e) {
            const std::string msg = e.what();
            EXPECT_TRUE(msg.find("parms") != std::string::npos || msg.find("durations_week") != std::string::npos ||
                        msg.find("start_dat") != std::string::npos)
                << msg;
        }
    }
}

TEST(Config, RoundTrip)
{
    RunConfig c;
    c.params.u = 6000;
    Scenario s = no_intervention_scenario();
    s.name = "late";
    s.schedule = PolicySchedule{Date(2020, 6, 1), 0.2, 90};
    c.scenarios["late"] = s;
    c.sweeps.durations_weeks = {2, 8};
    c.ratio_dates = {Date(2021, 6, 30)};
    c.data_dir = "somewhere";
    const RunConfig back = config_from_json(json::parse(config_to_json(c).dump()));
    EXPECT_EQ(back, c);
}

TEST(Io, AtomicWriteCreatesDirectoriesAndLeavesNoTemporaries)
{
    TempDir dir;
    write_file_atomic(dir / "a" / "b" / "out.txt", "first");
    write_file_atomic(dir / "a" / "b" / "out.txt", "second");
    EXPECT_EQ(read_text_file(dir / "a" / "b" / "out.txt"), "second");
    std::size_t n = 0;
    for ([[maybe_unused]] const auto& e : fs::directory_iterator(dir / "a" / "b")) {
        ++n;
    }
    EXPECT_EQ(n, 1u);
    write_file_atomic(dir / "file", "x");
    EXPECT_THROW(write_file_atomic(dir / "file" / "child.txt", "y"), IoError);
}

TEST(Csv, QuotingAndNumbers)
{
    EXPECT_EQ(csv::split_line(R"(a,"b,c","d""e",)"), (std::vector<std::string>{"a", "b,c", "d\"e", ""}));
    EXPECT_EQ(csv::quote("x,y"), "\"x,y\"");
    EXPECT_FALSE(csv::to_double("1.5x"));
    EXPECT_FALSE(csv::to_double("nan"));
    EXPECT_EQ(*csv::to_double(" 2.5 "), 2.5);
    for (double v : {0.1, 1.0 / 3, 2.041e-11, 7.7e9 + 0.5, -1e-300}) {
        EXPECT_EQ(std::strtod(csv::format_double(v).c_str(), nullptr), v);
    }
    EXPECT_EQ(csv::format_double(0.1), "0.1");
}
