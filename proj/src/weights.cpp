#include "wle/weights.hpp"

#include <sstream>

namespace wle {

double weight(const WeightSpec& spec, double tau)
{
    return std::visit([tau](const auto& k) { return weight(k, tau); }, spec);
}

double weight_derivative(const WeightSpec& spec, double tau)
{
    return std::visit([tau](const auto& k) { return weight_derivative(k, tau); }, spec);
}

void validate(const WeightSpec& spec)
{
    std::visit([](const auto& k) { k.validate(); }, spec);
}

double weight_first_derivative_at_zero(const WeightSpec& spec)
{
    validate(spec);
    const double h = 1e-4;
    return (weight(spec, h) - weight(spec, -h)) / (2 * h);
}

double weight_second_derivative_at_zero(const WeightSpec& spec)
{
    validate(spec);
    if (std::abs(weight_first_derivative_at_zero(spec)) > 1e-6)
        throw NumericError("weight function is not flat at zero");
    if (const auto* g = std::get_if<GammaKernel>(&spec))
        return 1.0 - g->alpha;
    if (const auto* f = std::get_if<ScaledFKernel>(&spec))
        return (2.0 - f->d1) * (f->d2 + 2.0) / (2.0 * (f->d1 + f->d2));
    const double h = 1e-4;
    return (weight(spec, h) - 2.0 * weight(spec, 0.0) + weight(spec, -h)) / (h * h);
}

std::string kernel_name(const WeightSpec& spec)
{
    switch (spec.index()) {
    case 0: return "gamma";
    case 1: return "weibull";
    case 2: return "gev";
    default: return "f";
    }
}

std::string describe(const WeightSpec& spec)
{
    std::ostringstream os;
    os.precision(6);
    std::visit(
        [&os](const auto& k) {
            using K = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<K, GammaKernel>)
                os << "gamma(alpha=" << k.alpha << ")";
            else if constexpr (std::is_same_v<K, WeibullKernel>)
                os << "weibull(k=" << k.k << ")";
            else if constexpr (std::is_same_v<K, GevKernel>)
                os << "gev(xi=" << k.xi << ")";
            else
                os << "f(d1=" << k.d1 << ", d2=" << k.d2 << ")";
        },
        spec);
    return os.str();
}

} // namespace wle
