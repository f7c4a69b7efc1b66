#include "wle/quadrature.hpp"
#include "wle/special.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace wle;

TEST(Quadrature, SmoothIntegrands)
{
    auto r = integrate([](double x) { return std::exp(-x * x / 2); }, -10, 10);
    EXPECT_NEAR(r.value, std::sqrt(2 * pi), 1e-10);
    EXPECT_TRUE(r.within_tolerance);
    EXPECT_NEAR(integrate([](double x) { return std::sin(x); }, 0, pi).value, 2.0, 1e-12);
}

TEST(Quadrature, KinkNeedsBreakpoint)
{
    auto f = [](double x) { return x < 0.3 ? 0.0 : x - 0.3; };
    auto r = integrate(f, 0, 1, {0.3});
    EXPECT_NEAR(r.value, 0.7 * 0.7 / 2, 1e-14);
    // step function integrates exactly with the jump as a breakpoint
    auto s = integrate([](double x) { return x >= 0.25 ? 1.0 : 0.0; }, 0, 1, {0.25});
    EXPECT_NEAR(s.value, 0.75, 1e-14);
}

TEST(Quadrature, VectorValued)
{
    auto r = integrate([](double x) { return Eigen::Vector2d(x, x * x); }, 0, 2);
    EXPECT_NEAR(r.value(0), 2.0, 1e-13);
    EXPECT_NEAR(r.value(1), 8.0 / 3, 1e-13);
}
