#include "wle/datasets.hpp"
#include "wle/report.hpp"
#include "wle/simulation.hpp"
#include "wle/tables.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <algorithm>
#include <map>
#include <numeric>

using namespace wle;

TEST(Datasets, DrosophilaCounts)
{
    const Dataset d = load_dataset("drosophila");
    ASSERT_EQ(d.size(), 34u);
    std::map<double, int> freq;
    for (double x : d.numeric("count"))
        ++freq[x];
    EXPECT_EQ(freq, (std::map<double, int>{{0, 23}, {1, 7}, {2, 3}, {91, 1}}));
}

TEST(Datasets, DocumentedSizes)
{
    const std::map<std::string, std::size_t> n{{"drosophila", 34}, {"newcomb", 66}, {"lubischew", 43},
        {"hertzsprung_russell", 47}, {"animals", 28}, {"voltage_drop", 41}};
    for (const auto& [name, size] : n)
        EXPECT_EQ(load_dataset(name).size(), size) << name;
    EXPECT_EQ(bundled_dataset_names().size(), n.size());
    const auto species = load_dataset("lubischew").text("species");
    EXPECT_EQ(std::count(species.begin(), species.end(), "concinna"), 21);
    const auto t = load_dataset("newcomb").numeric("time");
    EXPECT_EQ(*std::min_element(t.begin(), t.end()), -44);
}

TEST(Datasets, Errors)
{
    EXPECT_THROW(load_dataset("unknown"), NotFound);
    EXPECT_THROW(load_dataset("rainfall"), NotFound);
    EXPECT_THROW(load_dataset("newcomb").numeric("nope"), NotFound);
    EXPECT_THROW(parse_dataset_csv("bad", "a,b\n1,2\n3\n"), DomainError);
    EXPECT_THROW(parse_dataset_csv("bad", "a\nx\n").numeric("a"), DomainError);
    // standard CRC-32 check value
    EXPECT_EQ(crc32_of("123456789"), 0xCBF43926u);
    EXPECT_NO_THROW(verify_checksum("x", "123456789", "cbf43926"));
    EXPECT_THROW(verify_checksum("x", "123456780", "cbf43926"), ChecksumError);
}

TEST(Datasets, ParseCsv)
{
    const Dataset d = parse_dataset_csv("t", "x,y\n1.5,2\n\n-3e2,4\n");
    EXPECT_EQ(d.columns, (std::vector<std::string>{"x", "y"}));
    EXPECT_EQ(d.numeric("x"), (std::vector<double>{1.5, -300}));
    const auto p = pairs(d, "x", "y");
    EXPECT_EQ(p[1], Vector2(-300, 4));
}

TEST(Simulation, ContaminatedDraws)
{
    RandomStream r(1, 1);
    double s = 0, s2 = 0;
    const int n = 100000;
    const auto x = draw_contaminated_sample(Scheme::scale, 1.0, n, r);
    for (double v : x) {
        s += v;
        s2 += v * v;
    }
    EXPECT_NEAR(s / n, 0.0, 0.05);
    EXPECT_NEAR(s2 / n, 25.0, 0.5);
    const auto l = draw_contaminated_sample(Scheme::location, 0.3, n, r);
    EXPECT_NEAR(std::accumulate(l.begin(), l.end(), 0.0) / n, 1.5, 0.03);
    const auto e = draw_contaminated_sample(Scheme::exponential, 0.5, n, r);
    EXPECT_NEAR(std::accumulate(e.begin(), e.end(), 0.0) / n, 3.0, 0.06);
}

TEST(Simulation, SeedDeterminismByteForByte)
{
    SimulationPlan plan = default_plan(Scheme::location);
    plan.reps = 12;
    plan.eps_grid = {0.0, 0.3};
    plan.threads = 1;
    const auto a = run_simulation(plan);
    plan.threads = 3;
    const auto b = run_simulation(plan);
    EXPECT_EQ(export_report(a, Format::json), export_report(b, Format::json));
    EXPECT_EQ(export_report(a, Format::csv), export_report(b, Format::csv));
    plan.seed += 1;
    EXPECT_NE(export_report(run_simulation(plan), Format::json), export_report(a, Format::json));
}

TEST(Simulation, MleCellsMatchTheory)
{
    // var of the mean of n draws from (1-e) N(0,1) + e N(0,25)
    SimulationPlan plan = default_plan(Scheme::scale);
    plan.estimators = {{"MLE", std::nullopt}};
    plan.reps = 2000;
    plan.eps_grid = {0.0, 0.3};
    const auto r = run_simulation(plan);
    for (double e : plan.eps_grid) {
        const auto& c = r.cell(e, "MLE");
        const double theory = (1 - e + 25 * e) / 30;
        EXPECT_NEAR(c.mse, theory, 4 * c.mc_se) << e;
        EXPECT_EQ(c.failures, 0);
    }
}

TEST(Simulation, PlanValidation)
{
    SimulationPlan p = default_plan(Scheme::scale);
    p.eps_grid = {0.6};
    EXPECT_THROW(p.validate(), InvalidSpec);
    p = default_plan(Scheme::scale);
    p.reps = 0;
    EXPECT_THROW(p.validate(), InvalidSpec);
    EXPECT_THROW(parse_scheme("nope"), InvalidSpec);
}

// Clean N(0,1), n = 500, R = 500: the WLE loses almost nothing to the MLE.
TEST(Simulation, EmpiricalEfficiency)
{
    const NormalFamily fam;
    double sm = 0, sm2 = 0, sw = 0, sw2 = 0;
    const int R = 500;
    for (int r = 0; r < R; ++r) {
        RandomStream rng(77, stream_id({r + 0ull}));
        const auto x = draw_contaminated_sample(Scheme::scale, 0.0, 500, rng);
        const ParamVector m = fam.mle(x);
        const Root w = solve_from(fam, x, ResidualConfig{}, GammaKernel{1.01}, SolverConfig{}, m);
        sm += m(0);
        sm2 += m(0) * m(0);
        sw += w.theta(0);
        sw2 += w.theta(0) * w.theta(0);
    }
    const double vm = sm2 / R - (sm / R) * (sm / R), vw = sw2 / R - (sw / R) * (sw / R);
    EXPECT_GE(vw / vm, 0.9);
    EXPECT_LE(vw / vm, 1.15);
}

TEST(Tables, KnownIdsAndErrors)
{
    EXPECT_EQ(table_ids().size(), 13u);
    EXPECT_THROW(reproduce_table("table99"), NotFound);
    const auto t = reproduce_table("table2");
    EXPECT_TRUE(t.passed());
    const auto r = reproduce_table("table4");
    EXPECT_FALSE(r.available);
    EXPECT_FALSE(r.passed());
}
