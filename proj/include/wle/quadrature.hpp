#pragma once

#include "wle/special.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <type_traits>
#include <vector>

namespace wle {

struct QuadratureConfig {
    double abs_tol = 1e-8;
    int order = 10;     // Gauss-Legendre points per panel
    int max_depth = 30;
    int initial_panels = 4;
    double truncation = 10.0; // scale units kept around the location on unbounded supports
};

template <class T>
struct Integral {
    T value;
    double error = 0.0;
    bool within_tolerance = true;
};

namespace detail {

template <class T, class = void>
struct plain_of {
    using type = typename T::PlainObject;
};
template <class T>
struct plain_of<T, std::enable_if_t<std::is_arithmetic_v<T>>> {
    using type = double;
};

inline double max_abs(double v) { return std::abs(v); }

template <class Derived>
double max_abs(const Eigen::MatrixBase<Derived>& v)
{
    return v.size() ? v.cwiseAbs().maxCoeff() : 0.0;
}

template <class F, class T>
T gl_panel(F& f, double a, double b, const QuadratureRule& rule)
{
    const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
    T sum = rule.weights[0] * f(mid + half * rule.nodes[0]);
    for (std::size_t i = 1; i < rule.nodes.size(); ++i)
        sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
    return half * sum;
}

template <class F, class T>
void adapt(F& f, double a, double b, const T& coarse, double tol, int depth,
    const QuadratureRule& rule, int max_depth, Integral<T>& out)
{
    const double m = 0.5 * (a + b);
    T left = gl_panel<F, T>(f, a, m, rule);
    T right = gl_panel<F, T>(f, m, b, rule);
    T fine = left + right;
    const double diff = max_abs(T(fine - coarse));
    if (diff <= tol || depth >= max_depth || !(m > a && m < b)) {
        if (diff > tol)
            out.within_tolerance = false;
        out.value += fine;
        out.error += diff;
        return;
    }
    adapt(f, a, m, left, 0.5 * tol, depth + 1, rule, max_depth, out);
    adapt(f, m, b, right, 0.5 * tol, depth + 1, rule, max_depth, out);
}

} // namespace detail

// Adaptive composite Gauss-Legendre over [a, b], optionally split at interior breakpoints
// where the integrand has kinks or jumps. T may be double or an Eigen vector/matrix.
template <class F>
auto integrate(F&& f, double a, double b, std::vector<double> breakpoints = {},
    const QuadratureConfig& cfg = {})
{
    using T = std::decay_t<decltype(f(a))>;
    using Plain = typename detail::plain_of<T>::type;
    const QuadratureRule& rule = gauss_legendre(cfg.order);

    std::vector<double> pts{a};
    std::sort(breakpoints.begin(), breakpoints.end());
    for (double p : breakpoints)
        if (p > a && p < b)
            pts.push_back(p);
    pts.push_back(b);

    std::vector<double> edges;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        for (int j = 0; j < cfg.initial_panels; ++j)
            edges.push_back(pts[i] + (pts[i + 1] - pts[i]) * j / cfg.initial_panels);
    }
    edges.push_back(b);

    Integral<Plain> out{};
    if constexpr (std::is_arithmetic_v<T>) {
        out.value = 0.0;
    } else {
        out.value = f(0.5 * (a + b));
        out.value.setZero();
    }
    const double width = b - a;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        const double lo = edges[i], hi = edges[i + 1];
        if (!(hi > lo))
            continue;
        Plain coarse = detail::gl_panel<F, Plain>(f, lo, hi, rule);
        detail::adapt(f, lo, hi, coarse, cfg.abs_tol * (hi - lo) / width, 0, rule, cfg.max_depth, out);
    }
    return out;
}

} // namespace wle
