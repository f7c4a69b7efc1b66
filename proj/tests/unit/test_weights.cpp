#include "wle/weights.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

using namespace wle;

namespace {

std::vector<WeightSpec> kernels()
{
    return {GammaKernel{1.01}, GammaKernel{1.5}, GammaKernel{3}, WeibullKernel{1.01}, WeibullKernel{2},
        GevKernel{0.5}, GevKernel{2}, GevKernel{10}, ScaledFKernel{2.1, 1}, ScaledFKernel{2.5, 1},
        ScaledFKernel{4, 3}};
}

std::vector<double> taus()
{
    std::vector<double> t{-0.999, -0.9, -0.5, -0.1, 0.05, 0.5, 1, 3, 10, 100, 1e4};
    return t;
}

double numeric_w1(const WeightSpec& s)
{
    const double h = 1e-5;
    return (weight(s, h) - weight(s, -h)) / (2 * h);
}

} // namespace

TEST(Weights, RangeAndFixedPoints)
{
    for (const auto& s : kernels()) {
        EXPECT_DOUBLE_EQ(weight(s, 0.0), 1.0) << describe(s);
        EXPECT_EQ(weight(s, -1.0), 0.0) << describe(s);
        EXPECT_EQ(weight(s, -2.0), 0.0);
        EXPECT_EQ(weight(s, INFINITY), 0.0);
        for (double t : taus()) {
            const double w = weight(s, t);
            EXPECT_GE(w, 0.0) << describe(s) << ' ' << t;
            EXPECT_LE(w, 1.0) << describe(s) << ' ' << t;
        }
    }
}

TEST(Weights, FlatAtZero)
{
    for (const auto& s : kernels()) {
        EXPECT_NEAR(numeric_w1(s), 0.0, 1e-6) << describe(s);
        EXPECT_NEAR(weight_first_derivative_at_zero(s), 0.0, 1e-6) << describe(s);
    }
}

TEST(Weights, DecreasingAwayFromZero)
{
    for (const auto& s : kernels()) {
        double prev = 1.0;
        for (double t = 0.01; t < 1e3; t *= 1.5) {
            const double w = weight(s, t);
            EXPECT_LE(w, prev + 1e-15) << describe(s) << ' ' << t;
            prev = w;
        }
        prev = 1.0;
        for (double t = -0.01; t > -1 + 1e-9; t = -1 + (t + 1) * 0.7) {
            const double w = weight(s, t);
            EXPECT_LE(w, prev + 1e-15) << describe(s) << ' ' << t;
            prev = w;
        }
    }
}

// Tails vanish. GEV decays like tau^(-(1+xi)/xi), so large xi needs much larger tau.
TEST(Weights, TailsVanish)
{
    for (const auto& s : kernels()) {
        const bool slow_gev = std::holds_alternative<GevKernel>(s) && std::get<GevKernel>(s).xi > 2;
        const double far = slow_gev ? 1e12 : 1e6;
        const bool slow = std::holds_alternative<GammaKernel>(s) && std::get<GammaKernel>(s).alpha < 1.1;
        EXPECT_LT(weight(s, slow ? 1e4 : far), 1e-3) << describe(s);
    }
}

TEST(Weights, TuningMonotonicity)
{
    // larger alpha, k or smaller xi, d1 closer to 2 ... each family ordered from mild to sharp
    for (double t : {-0.6, -0.2, 0.4, 2.0, 20.0}) {
        EXPECT_GE(weight(GammaKernel{1.01}, t), weight(GammaKernel{1.1}, t));
        EXPECT_GE(weight(GammaKernel{1.1}, t), weight(GammaKernel{2}, t));
        EXPECT_GE(weight(WeibullKernel{1.01}, t), weight(WeibullKernel{1.1}, t));
        EXPECT_GE(weight(ScaledFKernel{2.1, 1}, t), weight(ScaledFKernel{2.5, 1}, t));
    }
}

TEST(Weights, LikelihoodLimit)
{
    // the weights tend to 1 as the tuning approaches its boundary
    for (double t : {-0.9, -0.5, 0.5, 5.0, 50.0}) {
        EXPECT_NEAR(weight(GammaKernel{1 + 1e-7}, t), 1.0, 1e-5) << t;
        EXPECT_NEAR(weight(WeibullKernel{1 + 1e-7}, t), 1.0, 1e-5) << t;
        EXPECT_NEAR(weight(ScaledFKernel{2 + 1e-7, 1}, t), 1.0, 1e-4) << t;
    }
}

TEST(Weights, GammaClosedForm)
{
    // (1 + tau)^(alpha - 1) exp(-(alpha - 1) tau)
    for (double a : {1.01, 1.5, 3.0})
        for (double t : {-0.7, 0.3, 4.0})
            EXPECT_NEAR(weight(GammaKernel{a}, t), std::pow(1 + t, a - 1) * std::exp(-(a - 1) * t), 1e-14);
}

TEST(Weights, SecondDerivativeAtZero)
{
    for (const auto& s : kernels()) {
        const double h = 1e-3;
        const double fd = (weight(s, h) - 2 * weight(s, 0.0) + weight(s, -h)) / (h * h);
        EXPECT_NEAR(weight_second_derivative_at_zero(s), fd, 1e-4 * std::max(1.0, std::abs(fd))) << describe(s);
    }
    EXPECT_NEAR(weight_second_derivative_at_zero(GammaKernel{3}), -2.0, 1e-12);
}

TEST(Weights, Validation)
{
    EXPECT_THROW(validate(GammaKernel{1.0}), InvalidSpec);
    EXPECT_THROW(validate(WeibullKernel{0.5}), InvalidSpec);
    EXPECT_THROW(validate(GevKernel{0}), InvalidSpec);
    EXPECT_THROW(validate(ScaledFKernel{2, 1}), InvalidSpec);
    EXPECT_EQ(kernel_name(ScaledFKernel{}), "f");
}
