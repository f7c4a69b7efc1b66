#pragma once

#include <utility>
#include <vector>

namespace wle {

inline constexpr double pi = 3.14159265358979323846;

double normal_pdf(double z);
double normal_cdf(double z);
// upper tail 1 - Phi(z), accurate far into the tail
double normal_sf(double z);
double normal_quantile(double p);

// P(X <= h, Y <= k) for standard bivariate normal with correlation r
double bivariate_normal_cdf(double h, double k, double r);
// P(X >= h, Y >= k)
double bivariate_normal_upper(double h, double k, double r);

double poisson_log_pmf(long x, double theta);
double poisson_pmf(long x, double theta);
// P(X <= x)
double poisson_cdf(long x, double theta);
// P(X >= x)
double poisson_sf(long x, double theta);

struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

// n-point Gauss-Legendre rule on [-1, 1] (Golub-Welsch)
const QuadratureRule& gauss_legendre(int n);
// n-point Gauss-Hermite rule for the weight exp(-x^2/2) / sqrt(2 pi)
const QuadratureRule& gauss_hermite_normal(int n);

} // namespace wle
