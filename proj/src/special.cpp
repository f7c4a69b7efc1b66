#include "wle/special.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

namespace wle {

namespace {

constexpr double sqrt2 = 1.41421356237309504880;
constexpr double two_pi = 2.0 * pi;

QuadratureRule golub_welsch(const Eigen::VectorXd& diag, const Eigen::VectorXd& off, double mass)
{
    const auto n = diag.size();
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
    J.diagonal() = diag;
    for (Eigen::Index i = 0; i + 1 < n; ++i) {
        J(i, i + 1) = off(i);
        J(i + 1, i) = off(i);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
    QuadratureRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        rule.nodes[i] = es.eigenvalues()(i);
        const double v = es.eigenvectors()(0, i);
        rule.weights[i] = mass * v * v;
    }
    return rule;
}

template <class Make>
const QuadratureRule& cached(std::map<int, QuadratureRule>& cache, int n, Make make)
{
    static std::mutex mu;
    std::lock_guard lock(mu);
    auto it = cache.find(n);
    if (it == cache.end())
        it = cache.emplace(n, make(n)).first;
    return it->second;
}

// Genz's BVND: P(X > dh, Y > dk) for correlation r
double bvnd(double dh, double dk, double r)
{
    int n;
    if (std::abs(r) < 0.3)
        n = 6;
    else if (std::abs(r) < 0.75)
        n = 12;
    else
        n = 20;
    const QuadratureRule& gl = gauss_legendre(n);

    double h = dh, k = dk, hk = h * k;
    double bvn = 0.0;
    if (std::abs(r) < 0.925) {
        if (std::abs(r) > 0) {
            const double hs = (h * h + k * k) / 2;
            const double asr = std::asin(r);
            for (int i = 0; i < n; ++i) {
                const double sn = std::sin(asr * (gl.nodes[i] + 1) / 2);
                bvn += gl.weights[i] * std::exp((sn * hk - hs) / (1 - sn * sn));
            }
            bvn = bvn * asr / (2 * two_pi);
        }
        bvn += normal_cdf(-h) * normal_cdf(-k);
        return bvn;
    }

    if (r < 0) {
        k = -k;
        hk = -hk;
    }
    if (std::abs(r) < 1) {
        const double as = (1 - r) * (1 + r);
        double a = std::sqrt(as);
        const double bs = (h - k) * (h - k);
        const double c = (4 - hk) / 8;
        const double d = (12 - hk) / 16;
        double asr = -(bs / as + hk) / 2;
        if (asr > -100)
            bvn = a * std::exp(asr) * (1 - c * (bs - as) * (1 - d * bs / 5) / 3 + c * d * as * as / 5);
        if (-hk < 100) {
            const double b = std::sqrt(bs);
            bvn -= std::exp(-hk / 2) * std::sqrt(two_pi) * normal_cdf(-b / a) * b
                * (1 - c * bs * (1 - d * bs / 5) / 3);
        }
        a /= 2;
        for (int i = 0; i < n; ++i) {
            const double t = a * (gl.nodes[i] + 1);
            const double xs = t * t;
            const double rs = std::sqrt(1 - xs);
            asr = -(bs / xs + hk) / 2;
            if (asr > -100) {
                bvn += a * gl.weights[i] * std::exp(asr)
                    * (std::exp(-hk * (1 - rs) / (2 * (1 + rs))) / rs - (1 + c * xs * (1 + d * xs)));
            }
        }
        bvn = -bvn / two_pi;
    }
    if (r > 0) {
        bvn += normal_cdf(-std::max(h, k));
    } else {
        bvn = -bvn;
        if (k > h)
            bvn += normal_cdf(k) - normal_cdf(h);
    }
    return bvn;
}

} // namespace

double normal_pdf(double z) { return std::exp(-0.5 * z * z) / std::sqrt(two_pi); }

double normal_cdf(double z) { return 0.5 * std::erfc(-z / sqrt2); }

double normal_sf(double z) { return 0.5 * std::erfc(z / sqrt2); }

double normal_quantile(double p)
{
    if (!(p > 0.0 && p < 1.0))
        return p == 0.0 ? -INFINITY : (p == 1.0 ? INFINITY : NAN);
    // bisection on the tail that keeps precision, then Newton polish
    const bool lower = p < 0.5;
    const double target = lower ? p : 1.0 - p;
    double lo = -40.0, hi = 0.0;
    for (int i = 0; i < 200 && hi - lo > 1e-15; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (normal_cdf(mid) < target)
            lo = mid;
        else
            hi = mid;
    }
    double z = 0.5 * (lo + hi);
    for (int i = 0; i < 2; ++i) {
        const double f = normal_pdf(z);
        if (f <= 0)
            break;
        z -= (normal_cdf(z) - target) / f;
    }
    return lower ? z : -z;
}

double bivariate_normal_upper(double h, double k, double r)
{
    return std::clamp(bvnd(h, k, r), 0.0, 1.0);
}

double bivariate_normal_cdf(double h, double k, double r)
{
    return std::clamp(bvnd(-h, -k, r), 0.0, 1.0);
}

double poisson_log_pmf(long x, double theta)
{
    if (x < 0)
        return -INFINITY;
    if (theta == 0.0)
        return x == 0 ? 0.0 : -INFINITY;
    return x * std::log(theta) - theta - std::lgamma(static_cast<double>(x) + 1.0);
}

double poisson_pmf(long x, double theta) { return std::exp(poisson_log_pmf(x, theta)); }

double poisson_cdf(long x, double theta)
{
    if (x < 0)
        return 0.0;
    double sum = 0.0;
    for (long j = 0; j <= x; ++j)
        sum += poisson_pmf(j, theta);
    return std::min(sum, 1.0);
}

double poisson_sf(long x, double theta)
{
    if (x <= 0)
        return 1.0;
    const double below = poisson_cdf(x - 1, theta);
    if (below <= 0.5)
        return 1.0 - below;
    // far upper tail: 1 - F(x-1) cancels, so sum the tail directly
    double sum = 0.0;
    for (long j = x;; ++j) {
        const double term = poisson_pmf(j, theta);
        sum += term;
        if (j > theta && (term <= sum * 1e-17 || term == 0.0))
            break;
    }
    return std::min(sum, 1.0);
}

const QuadratureRule& gauss_legendre(int n)
{
    static std::map<int, QuadratureRule> cache;
    return cached(cache, n, [](int m) {
        Eigen::VectorXd off(std::max(m - 1, 0));
        for (int i = 1; i < m; ++i)
            off(i - 1) = i / std::sqrt(4.0 * i * i - 1.0);
        return golub_welsch(Eigen::VectorXd::Zero(m), off, 2.0);
    });
}

const QuadratureRule& gauss_hermite_normal(int n)
{
    static std::map<int, QuadratureRule> cache;
    return cached(cache, n, [](int m) {
        Eigen::VectorXd off(std::max(m - 1, 0));
        for (int i = 1; i < m; ++i)
            off(i - 1) = std::sqrt(static_cast<double>(i));
        return golub_welsch(Eigen::VectorXd::Zero(m), off, 1.0);
    });
}

} // namespace wle
