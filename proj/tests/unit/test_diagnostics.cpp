#include "wle/diagnostics.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace wle;

namespace {

std::vector<WeightSpec> specs()
{
    return {GammaKernel{1.05}, GammaKernel{3}, WeibullKernel{1.5}, GevKernel{2}, ScaledFKernel{2.5, 1}};
}

ParamVector v(std::initializer_list<double> x)
{
    ParamVector p(static_cast<Eigen::Index>(x.size()));
    Eigen::Index i = 0;
    for (double e : x)
        p(i++) = e;
    return p;
}

} // namespace

TEST(Diagnostics, FisherConsistency)
{
    for (const auto& s : specs()) {
        for (double p : {0.5, 0.2}) {
            ResidualConfig rc;
            rc.p = p;
            EXPECT_LT(fisher_consistency_check(NormalFamily{}, v({1, 2}), rc, s).cwiseAbs().maxCoeff(), 1e-6);
            EXPECT_LT(fisher_consistency_check(PoissonFamily{}, v({3.5}), rc, s).cwiseAbs().maxCoeff(), 1e-6);
            EXPECT_LT(fisher_consistency_check(ExponentialFamily{}, v({0.7}), rc, s).cwiseAbs().maxCoeff(), 1e-6);
            EXPECT_LT(fisher_consistency_check(NormalLocationFamily(1.0), v({-2}), rc, s).cwiseAbs().maxCoeff(), 1e-6);
        }
    }
}

TEST(Diagnostics, InfluenceAtTheModelEqualsMle)
{
    for (const auto& s : specs()) {
        for (double y : {-2.0, 0.5, 4.0}) {
            const ParamVector th = v({1, 2});
            const auto r = influence_first_order(NormalFamily{}, th, s, y);
            // MLE influence: (y - mu, (y - mu)^2 - sigma^2)
            EXPECT_NEAR(r.first_order(0), y - 1, 1e-5) << describe(s) << ' ' << y;
            EXPECT_NEAR(r.first_order(1), (y - 1) * (y - 1) - 2, 1e-5) << describe(s) << ' ' << y;
        }
        for (double y : {0.0, 2.0, 9.0}) {
            const auto r = influence_first_order(PoissonFamily{}, v({3}), s, y);
            EXPECT_NEAR(r.first_order(0), y - 3, 1e-5) << describe(s) << ' ' << y;
        }
        for (double y : {0.1, 1.0, 6.0}) {
            const auto r = influence_first_order(ExponentialFamily{}, v({0.5}), s, y);
            EXPECT_NEAR(r.first_order(0), -0.25 * (y - 2), 1e-5) << describe(s) << ' ' << y;
        }
    }
}

TEST(Diagnostics, SecondOrderVanishesInTheLikelihoodLimit)
{
    const auto r = influence_second_order(NormalLocationFamily(1.0), v({1}), GammaKernel{1 + 1e-8}, 10.0);
    EXPECT_NEAR(r.first_order(0), 9.0, 1e-5);
    EXPECT_NEAR(r.second_order, 0.0, 1e-4);
}

TEST(Diagnostics, SecondOrderBiasBelowTheMleLine)
{
    std::vector<double> eps;
    for (int i = 1; i <= 10; ++i)
        eps.push_back(0.01 * i);
    for (double a : {2.0, 3.0, 5.0}) {
        const auto r = influence_second_order(NormalLocationFamily(1.0), v({1}), GammaKernel{a}, 10.0);
        EXPECT_DOUBLE_EQ(r.w2, -(a - 1));
        for (const auto& p : bias_curve(r, eps)) {
            EXPECT_NEAR(p.first_order, 9.0 * p.epsilon, 1e-4);
            EXPECT_LT(p.second_order, p.first_order) << a << ' ' << p.epsilon;
        }
    }
    EXPECT_THROW(influence_second_order(NormalFamily{}, v({0, 1}), GammaKernel{2}, 1.0), InvalidSpec);
}

TEST(Diagnostics, MixtureScanRoots)
{
    ContaminationSpec cs;
    cs.base = normal_population(0, 1);
    cs.contaminant = normal_population(5, 1);
    cs.epsilon = 0.0;
    std::vector<double> grid;
    for (int i = 0; i <= 180; ++i)
        grid.push_back(-2 + 0.05 * i);
    const auto clean = mixture_root_scan(cs, GammaKernel{1.05}, ResidualConfig{}, grid);
    ASSERT_EQ(clean.roots.size(), 1u);
    EXPECT_NEAR(clean.roots[0], 0.0, 1e-3);
    for (std::size_t i = 0; i < grid.size(); ++i)
        EXPECT_EQ(clean.score[i] > 0, grid[i] < clean.roots[0]) << grid[i];
    cs.epsilon = 0.2;
    const auto mixed = mixture_root_scan(cs, GammaKernel{1.05}, ResidualConfig{}, grid);
    ASSERT_EQ(mixed.roots.size(), 3u);
    EXPECT_NEAR(mixed.roots.front(), 0.0, 0.3);
    EXPECT_NEAR(mixed.roots.back(), 5.0, 0.3);
    cs.point = 1.0;
    EXPECT_THROW(cs.validate(), InvalidSpec);
}

TEST(Diagnostics, ConcentrationEllipse)
{
    EXPECT_NEAR(chi_square2_quantile(0.95), 5.991464547107979, 1e-12);
    EXPECT_NEAR(chi_square2_quantile(0.0), 0.0, 0.0);
    const ParamVector th = v({1, 2, 4, 1, 0.5});
    const Ellipse e = concentration_ellipse(th, 0.95);
    const Eigen::Matrix2d Si = BivariateNormalFamily::covariance(th).inverse();
    for (const auto& p : ellipse_polyline(e, 37)) {
        const Vector2 d = p - Vector2(1, 2);
        EXPECT_NEAR(d.dot(Si * d), 5.991464547107979, 1e-9);
    }
    // area = pi q sqrt(det S)
    EXPECT_NEAR(pi * e.major * e.minor, pi * 5.991464547107979 * std::sqrt(3.0), 1e-9);
    const Ellipse d = concentration_ellipse(v({0, 0, 9, 1, 0}), 0.5);
    EXPECT_NEAR(d.angle, 0.0, 1e-12);
    EXPECT_NEAR(d.major, 3 * std::sqrt(2 * std::log(2.0)), 1e-12);
}
