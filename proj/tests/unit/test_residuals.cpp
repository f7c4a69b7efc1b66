#include "wle/residuals.hpp"
#include "wle/rng.hpp"
#include "wle/special.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace wle;

TEST(Residuals, EmpiricalFunctionsCountTies)
{
    const EmpiricalFunctions e({2.0, 1.0, 2.0, 5.0});
    EXPECT_DOUBLE_EQ(e.cdf(2.0), 0.75);
    EXPECT_DOUBLE_EQ(e.survival(2.0), 0.75);
    EXPECT_DOUBLE_EQ(e.cdf(0.0), 0.0);
    EXPECT_DOUBLE_EQ(e.survival(6.0), 0.0);
    EXPECT_DOUBLE_EQ(e.cdf(1.5), 0.25);
    EXPECT_DOUBLE_EQ(e.cdf_at(0, TieRule::count), 0.75);
    EXPECT_DOUBLE_EQ(e.survival_at(3, TieRule::count), 0.25);
}

TEST(Residuals, SortedRankBreaksTiesInSampleOrder)
{
    const EmpiricalFunctions e({2.0, 1.0, 2.0, 5.0});
    // order statistics: 1 (obs 1), 2 (obs 0), 2 (obs 2), 5 (obs 3)
    EXPECT_DOUBLE_EQ(e.cdf_at(1, TieRule::sorted_rank), 0.25);
    EXPECT_DOUBLE_EQ(e.cdf_at(0, TieRule::sorted_rank), 0.5);
    EXPECT_DOUBLE_EQ(e.cdf_at(2, TieRule::sorted_rank), 0.75);
    EXPECT_DOUBLE_EQ(e.survival_at(0, TieRule::sorted_rank), 0.75);
    EXPECT_DOUBLE_EQ(e.survival_at(2, TieRule::sorted_rank), 0.5);
    EXPECT_DOUBLE_EQ(e.survival_at(3, TieRule::sorted_rank), 0.25);
}

TEST(Residuals, ThreeBranches)
{
    ResidualConfig c;
    EXPECT_DOUBLE_EQ(tau_from_functions(c, 0.2, 0.9, 0.1, 0.9), 1.0);
    EXPECT_DOUBLE_EQ(tau_from_functions(c, 0.7, 0.45, 0.7, 0.3), 0.5);
    // F exactly p uses the lower branch
    EXPECT_DOUBLE_EQ(tau_from_functions(c, 0.25, 0.9, 0.5, 0.5), -0.5);
    c.p = 0.2;
    EXPECT_DOUBLE_EQ(tau_from_functions(c, 0.9, 0.9, 0.5, 0.5), 0.0);
    EXPECT_DOUBLE_EQ(tau_from_functions(c, 0.3, 0.9, 0.2, 0.8), 0.5);
    c.p = 0.5;
    c.beta = 0.5;
    EXPECT_NEAR(tau_from_functions(c, 0.2, 0.9, 0.04, 0.96), 0.2 / 0.2 - 1, 1e-15);
}

TEST(Residuals, ZeroModelTail)
{
    const ResidualConfig c;
    EXPECT_THROW(tau_from_functions(c, 0.1, 1.0, 0.0, 1.0), NumericError);
    EXPECT_EQ(tau_from_functions_unchecked(c, 0.1, 1.0, 0.0, 1.0), INFINITY);
    ResidualConfig bad;
    bad.p = 0.7;
    EXPECT_THROW(bad.validate(), InvalidSpec);
}

TEST(Residuals, PopulationResidualIsZero)
{
    const ResidualConfig c;
    for (double z = -6; z <= 6; z += 0.1) {
        const double F = normal_cdf(z), S = normal_sf(z);
        EXPECT_NEAR(tau_from_functions(c, F, S, F, S), 0.0, 1e-15);
    }
}

TEST(Residuals, LargeSampleResidualsVanish)
{
    RandomStream r(9, 9);
    std::vector<double> x(20000);
    for (auto& v : x)
        v = r.normal(3, 2);
    const EmpiricalFunctions e(x);
    const NormalFamily fam;
    ParamVector th(2);
    th << 3, 4;
    for (double z : {-1.5, -0.5, 0.0, 0.7, 1.6}) {
        const double tau = tau_univariate(ResidualConfig{}, e, fam, th, 3 + 2 * z);
        EXPECT_LT(std::abs(tau), 0.08) << z;
    }
}

TEST(Residuals, BivariateUsesSmallestModelQuadrant)
{
    const BivariateNormalFamily fam;
    ParamVector th(5);
    th << 0, 0, 1, 4, 0.6;
    const Vector2 p(1.0, -0.5);
    const Quadrants q = fam.quadrant_probabilities(th, p);
    EXPECT_NEAR(q[0] + q[1] + q[2] + q[3], 1.0, 1e-12);
    EXPECT_NEAR(q[0], bivariate_normal_cdf(1.0, -0.25, 0.6), 1e-14);
    EXPECT_NEAR(q[0] + q[1], normal_cdf(1.0), 1e-12);

    const std::vector<Vector2> s{{0, 0}, {2, -1}, {1.5, 1}, {-1, -2}, {1, -0.5}};
    const EmpiricalQuadrants e(s);
    const int j = minimal_quadrant(q);
    // empirical quadrant by direct counting, inclusive on both sides
    int count = 0;
    for (const auto& v : s) {
        const bool lx = v.x() <= p.x(), gx = v.x() >= p.x(), ly = v.y() <= p.y(), gy = v.y() >= p.y();
        const bool in[4] = {lx && ly, lx && gy, gx && ly, gx && gy};
        count += in[j];
    }
    EXPECT_NEAR(tau_bivariate(ResidualConfig{}, e, fam, th, p), count / 5.0 / q[j] - 1, 1e-12);
    EXPECT_EQ(minimal_quadrant({0.1, 0.1, 0.4, 0.4}), 0);
    EXPECT_EQ(minimal_quadrant({0.3, 0.2, 0.2, 0.3}), 1);
}

TEST(Residuals, RegressionUsesStandardNormal)
{
    const LinearRegressionFamily fam;
    ParamVector th(3);
    th << 1, 2, 0.5;
    const std::vector<RegressionPoint> pts{{0, 1.2}, {1, 2.6}, {2, 5.5}, {3, 6.8}};
    const auto z = standardized_residuals(fam, th, pts);
    EXPECT_NEAR(z[2], (5.5 - 5) / 0.5, 1e-14);
    const EmpiricalFunctions e(z);
    const Eigen::VectorXd tau = residual_vector(ResidualConfig{}, fam, th, pts);
    for (std::size_t i = 0; i < pts.size(); ++i)
        EXPECT_NEAR(tau(i), tau_regression(ResidualConfig{}, e, z[i]), 1e-14);
}
