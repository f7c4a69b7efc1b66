#include "wle/special.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace wle;

namespace {

// Simpson on a fine grid; slow but independent of the library quadrature
template <class F>
double simpson(F f, double a, double b, int n = 20000)
{
    const double h = (b - a) / n;
    double s = f(a) + f(b);
    for (int i = 1; i < n; ++i)
        s += f(a + i * h) * (i % 2 ? 4 : 2);
    return s * h / 3;
}

} // namespace

TEST(Special, NormalCdfMatchesErfc)
{
    for (double z = -8; z <= 8; z += 0.25) {
        EXPECT_NEAR(normal_cdf(z), 0.5 * std::erfc(-z / std::sqrt(2.0)), 1e-15);
        EXPECT_NEAR(normal_sf(z), 0.5 * std::erfc(z / std::sqrt(2.0)), 1e-15);
    }
    EXPECT_GT(normal_sf(30), 0.0);
}

TEST(Special, QuantileInvertsCdf)
{
    for (double p : {1e-12, 1e-6, 0.01, 0.3, 0.5, 0.8, 0.975, 1 - 1e-9})
        EXPECT_NEAR(normal_cdf(normal_quantile(p)), p, 1e-12 * std::max(1.0, p / 1e-3));
    EXPECT_NEAR(normal_quantile(0.975), 1.959963984540054, 1e-10);
}

TEST(Special, BivariateNormalAgainstIntegral)
{
    for (double r : {-0.9, -0.3, 0.0, 0.5, 0.95}) {
        for (auto [h, k] : {std::pair{0.0, 0.0}, {1.0, -0.5}, {-1.5, 2.0}, {0.3, 0.7}}) {
            // P(X <= h, Y <= k) = int_{-inf}^{h} phi(x) Phi((k - r x)/sqrt(1 - r^2)) dx
            const double s = std::sqrt(1 - r * r);
            const double ref = simpson([&](double x) { return normal_pdf(x) * normal_cdf((k - r * x) / s); }, -12, h);
            EXPECT_NEAR(bivariate_normal_cdf(h, k, r), ref, 1e-10) << h << ' ' << k << ' ' << r;
            EXPECT_NEAR(bivariate_normal_upper(h, k, r), 1 - normal_cdf(h) - normal_cdf(k) + ref, 1e-10);
        }
    }
    EXPECT_NEAR(bivariate_normal_cdf(0, 0, 0.5), 0.25 + std::asin(0.5) / (2 * pi), 1e-14);
}

TEST(Special, PoissonAgainstLgamma)
{
    for (double th : {0.3, 3.0588, 40.0}) {
        double cdf = 0;
        for (long x = 0; x < 120; ++x) {
            const double pmf = std::exp(x * std::log(th) - th - std::lgamma(x + 1.0));
            EXPECT_NEAR(poisson_pmf(x, th), pmf, 1e-14);
            cdf += pmf;
            EXPECT_NEAR(poisson_cdf(x, th), cdf, 1e-12);
            EXPECT_NEAR(poisson_sf(x, th) + cdf - pmf, 1.0, 1e-12);
        }
    }
    // far upper tail keeps relative accuracy
    EXPECT_NEAR(poisson_sf(91, 0.3939) / poisson_pmf(91, 0.3939), 1.0, 1e-2);
    EXPECT_GT(poisson_sf(91, 0.3939), 0.0);
}

TEST(Special, GaussRulesIntegratePolynomialsExactly)
{
    const auto& gl = gauss_legendre(10);
    for (int p = 0; p < 20; ++p) {
        double s = 0;
        for (std::size_t i = 0; i < gl.nodes.size(); ++i)
            s += gl.weights[i] * std::pow(gl.nodes[i], p);
        EXPECT_NEAR(s, p % 2 ? 0.0 : 2.0 / (p + 1), 1e-13) << p;
    }
    // E[Z^p] for Z ~ N(0,1): (p-1)!!
    const auto& gh = gauss_hermite_normal(8);
    double df = 1;
    for (int p = 0; p < 16; p += 2) {
        double s = 0;
        for (std::size_t i = 0; i < gh.nodes.size(); ++i)
            s += gh.weights[i] * std::pow(gh.nodes[i], p);
        EXPECT_NEAR(s, df, 1e-9 * df) << p;
        df *= p + 1;
    }
}
