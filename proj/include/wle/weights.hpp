#pragma once

#include "wle/core.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <variant>

namespace wle {

// Every kernel is a mode-normalized density ratio H(tau) = g(tau + 1) / g(1)
// on tau in [-1, inf): H(0) = 1, H'(0) = 0, H(-1) = 0.

struct GammaKernel {
    double alpha = 1.01;

    double rate() const { return alpha - 1.0; }
    void validate() const
    {
        if (!(alpha > 1) || !std::isfinite(alpha))
            throw InvalidSpec("gamma kernel needs alpha > 1");
    }
};

struct WeibullKernel {
    double k = 1.01;

    double scale() const { return std::pow((k - 1.0) / k, -1.0 / k); }
    void validate() const
    {
        if (!(k > 1) || !std::isfinite(k))
            throw InvalidSpec("weibull kernel needs k > 1");
    }
};

struct GevKernel {
    double xi = 10.0;

    double location() const { return std::pow(1.0 + xi, xi) - 1.0; }
    double scale() const { return xi * std::pow(1.0 + xi, xi); }
    void validate() const
    {
        if (!(xi > 0) || !std::isfinite(xi))
            throw InvalidSpec("gev kernel needs xi > 0");
    }
};

struct ScaledFKernel {
    double d1 = 2.1;
    double d2 = 1.0;

    double shift() const { return d1 * (d2 + 2.0) / ((d1 - 2.0) * d2); }
    void validate() const
    {
        if (!(d1 > 2) || !(d2 > 0) || !std::isfinite(d1) || !std::isfinite(d2))
            throw InvalidSpec("scaled F kernel needs d1 > 2 and d2 > 0");
    }
};

using WeightSpec = std::variant<GammaKernel, WeibullKernel, GevKernel, ScaledFKernel>;

template <class Scalar>
Scalar log_weight(const GammaKernel& g, const Scalar& tau)
{
    using std::log1p;
    return (g.alpha - 1.0) * (log1p(tau) - tau);
}

template <class Scalar>
Scalar log_weight(const WeibullKernel& w, const Scalar& tau)
{
    using std::log1p;
    using std::pow;
    const double k = w.k;
    return (k - 1.0) * log1p(tau) - (pow(1.0 + tau, k) - 1.0) * (k - 1.0) / k;
}

template <class Scalar>
Scalar log_weight(const GevKernel& g, const Scalar& tau)
{
    using std::exp;
    using std::log1p;
    const double xi = g.xi;
    // 1 + xi (tau - mu) / beta reduces to (1 + tau) / (1 + xi)^xi, so
    // t(tau) = (1 + xi) (1 + tau)^(-1/xi) and t(0) = 1 + xi
    const Scalar l = log1p(tau);
    return -(1.0 + xi) / xi * l + (1.0 + xi) * (1.0 - exp(-l / xi));
}

template <class Scalar>
Scalar log_weight(const ScaledFKernel& f, const Scalar& tau)
{
    using std::log;
    using std::log1p;
    const double a = f.shift();
    const auto log_g = [&](const auto& x) {
        return (f.d1 / 2.0 - 1.0) * log(x / a) - ((f.d1 + f.d2) / 2.0) * log1p(f.d1 * x / (f.d2 * a));
    };
    return log_g(tau + 1.0) - log_g(1.0);
}

// d/dtau of log H, used by the analytic weight derivative
inline double log_weight_slope(const GammaKernel& g, double tau) { return (g.alpha - 1.0) * (1.0 / (1.0 + tau) - 1.0); }

inline double log_weight_slope(const WeibullKernel& w, double tau)
{
    return (w.k - 1.0) * (1.0 / (1.0 + tau) - std::pow(1.0 + tau, w.k - 1.0));
}

inline double log_weight_slope(const GevKernel& g, double tau)
{
    const double c = (1.0 + g.xi) / g.xi;
    return c * (std::exp(-std::log1p(tau) / g.xi) - 1.0) / (1.0 + tau);
}

inline double log_weight_slope(const ScaledFKernel& f, double tau)
{
    const double x = tau + 1.0, b = f.d1 / (f.d2 * f.shift());
    return (f.d1 / 2.0 - 1.0) / x - ((f.d1 + f.d2) / 2.0) * b / (1.0 + b * x);
}

template <class Kernel>
double weight(const Kernel& kernel, double tau)
{
    if (!(tau > -1.0) || tau == std::numeric_limits<double>::infinity())
        return 0.0;
    const double w = std::exp(log_weight(kernel, tau));
    return w > 1.0 ? 1.0 : w;
}

double weight(const WeightSpec& spec, double tau);

// H'(tau); zero outside (-1, inf) and where the weight is capped at one
template <class Kernel>
double weight_derivative(const Kernel& kernel, double tau)
{
    if (!(tau > -1.0) || tau == std::numeric_limits<double>::infinity())
        return 0.0;
    const double w = std::exp(log_weight(kernel, tau));
    return w >= 1.0 ? 0.0 : w * log_weight_slope(kernel, tau);
}

double weight_derivative(const WeightSpec& spec, double tau);

void validate(const WeightSpec& spec);

// analytic for gamma and scaled F kernels, central differences (h = 1e-4) otherwise.
// Throws NumericError if the numerical first derivative at zero is not ~0.
double weight_second_derivative_at_zero(const WeightSpec& spec);

double weight_first_derivative_at_zero(const WeightSpec& spec);

std::string describe(const WeightSpec& spec);

// "gamma" | "weibull" | "gev" | "f"
std::string kernel_name(const WeightSpec& spec);

} // namespace wle
