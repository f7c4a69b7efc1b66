#pragma once

#include "wle/core.hpp"
#include "wle/models.hpp"
#include "wle/quadrature.hpp"
#include "wle/residuals.hpp"
#include "wle/weights.hpp"

#include <functional>
#include <optional>
#include <tuple>
#include <ostream>
#include <vector>

namespace wle {

// A univariate distribution G as the diagnostics consume it. survival is P(X >= x).
// Discrete populations live on the integers 0..lattice_max and integrate by summation.
struct Population {
    std::function<double(double)> cdf;
    std::function<double(double)> survival;
    std::function<double(double)> density;
    double lower = 0.0;
    double upper = 0.0;
    std::vector<double> breakpoints;
    bool discrete = false;
};

// Integration range for the model at theta: +-truncation sd for normals,
// up to a tail mass below 1e-13 for the exponential, summation for Poisson.
Population model_population(const PoissonFamily& family, const ParamVector& theta, const QuadratureConfig& q = {});
Population model_population(const NormalFamily& family, const ParamVector& theta, const QuadratureConfig& q = {});
Population model_population(const NormalLocationFamily& family, const ParamVector& theta, const QuadratureConfig& q = {});
Population model_population(const ExponentialFamily& family, const ParamVector& theta, const QuadratureConfig& q = {});

Population normal_population(double mean, double sd, const QuadratureConfig& q = {});

// (1 - epsilon) base + epsilon contaminant
Population mix(const Population& base, const Population& contaminant, double epsilon);

struct ContaminationSpec {
    Population base;
    std::optional<double> point;            // point mass at y
    std::optional<Population> contaminant;  // or a contaminating component
    double epsilon = 0.0;

    void validate() const;
    // the contaminated population; only defined for a contaminating component
    Population mixture() const;
};

// Sum over the lattice or adaptive quadrature over [lower, upper] with breakpoints.
template <class F>
auto integrate_population(const Population& g, F&& f, std::vector<double> extra_breaks = {},
    const QuadratureConfig& q = {})
{
    if (g.discrete) {
        using T = std::decay_t<decltype(f(0.0))>;
        using Plain = typename detail::plain_of<T>::type;
        Plain sum = f(0.0) * g.density(0.0);
        for (double k = 1.0; k <= g.upper; k += 1.0) {
            const double pk = g.density(k);
            if (pk != 0.0)
                sum += f(k) * pk;
        }
        return Integral<Plain>{sum, 0.0, true};
    }
    using Plain = typename detail::plain_of<std::decay_t<decltype(f(0.0))>>::type;
    std::vector<double> breaks = g.breakpoints;
    breaks.insert(breaks.end(), extra_breaks.begin(), extra_breaks.end());
    // a concrete return type, so no Eigen expression outlives the temporary f(x)
    return integrate([&](double x) -> Plain { return f(x) * g.density(x); }, g.lower, g.upper, breaks, q);
}

// integral of H(tau(x)) u(x) dF(x) with tau computed against the model itself; zero by Fisher consistency.
template <UnivariateFamily Family>
ParamVector fisher_consistency_check(const Family& family, const ParamVector& theta, const ResidualConfig& residual,
    const WeightSpec& spec, const QuadratureConfig& q = {})
{
    require_parameter(family, theta);
    residual.validate();
    validate(spec);
    const Population g = model_population(family, theta, q);
    auto integrand = [&](double x) -> ParamVector {
        const CdfPair m = family.cdf_and_survival(theta, x);
        const double tau = tau_from_functions_unchecked(residual, m.cdf, m.survival, m.cdf, m.survival);
        return weight(spec, tau) * family.score(theta, x);
    };
    const auto result = integrate_population(g, integrand, {}, q);
    if (!result.within_tolerance)
        throw NumericError("fisher consistency quadrature did not reach tolerance");
    return result.value;
}

// Point where the model cdf crosses one half, by bisection over the population range.
// The tail branches switch there, so integrands jump across it.
template <UnivariateFamily Family>
double model_median(const Family& family, const ParamVector& theta, const Population& g)
{
    double lo = g.lower, hi = g.upper;
    for (int i = 0; i < 200 && hi - lo > 1e-14 * std::max(1.0, std::abs(lo)); ++i) {
        const double mid = 0.5 * (lo + hi);
        (family.cdf_and_survival(theta, mid).cdf <= 0.5 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

struct InfluenceReport {
    ParamVector first_order; // T'(y)
    Matrix D;
    ParamVector N;
    double second_order = 0.0; // T''(y), scalar families only
    double w2 = 0.0;           // w''(0) used in T''
};

// Influence function D^{-1} N for a general population G with functional value theta_g.
template <UnivariateFamily Family>
InfluenceReport influence_first_order(const Population& g, const Family& family, const ParamVector& theta_g,
    const WeightSpec& spec, double y, const QuadratureConfig& q = {})
{
    require_parameter(family, theta_g);
    validate(spec);
    if (!family.in_support(y))
        throw DomainError("contamination point outside support");
    const int d = family.dimension();
    auto split = [&](double x) {
        const CdfPair m = family.cdf_and_survival(theta_g, x);
        const bool lower = m.cdf <= 0.5;
        const double tau = lower ? (m.cdf > 0 ? g.cdf(x) / m.cdf - 1 : INFINITY)
                                 : (m.survival > 0 ? g.survival(x) / m.survival - 1 : INFINITY);
        return std::make_tuple(m, lower, tau);
    };
    auto H = [&](double t) { return weight(spec, t); };
    auto dH = [&](double t) { return weight_derivative(spec, t); };

    auto d_integrand = [&](double x) -> Matrix {
        auto [m, lower, tau] = split(x);
        const ParamVector u = family.score(theta_g, x);
        Matrix out = -H(tau) * family.score_jacobian(theta_g, x);
        const double hp = dH(tau);
        if (hp != 0.0) {
            const ParamVector grad = lower ? ParamVector(family.cdf_gradient(theta_g, x) / m.cdf)
                                           : ParamVector(family.survival_gradient(theta_g, x) / m.survival);
            out += hp * (tau + 1) * u * grad.transpose();
        }
        return out;
    };
    auto n_integrand = [&](double x) -> ParamVector {
        auto [m, lower, tau] = split(x);
        const double hp = dH(tau);
        if (hp == 0.0)
            return ParamVector::Zero(d);
        const ParamVector u = family.score(theta_g, x);
        const double indicator = lower ? (x >= y ? 1.0 : 0.0) : (y >= x ? 1.0 : 0.0);
        const double tail = lower ? m.cdf : m.survival;
        return hp * (indicator / tail - (tau + 1)) * u;
    };

    std::vector<double> breaks{y};
    if (!g.discrete)
        breaks.push_back(model_median(family, theta_g, g));
    const auto Dint = integrate_population(g, d_integrand, breaks, q);
    const auto Nint = integrate_population(g, n_integrand, breaks, q);
    InfluenceReport report;
    report.D = Dint.value;
    auto [my, lower_y, tau_y] = split(y);
    report.N = H(tau_y) * family.score(theta_g, y) + Nint.value;
    Eigen::FullPivLU<Matrix> lu(report.D);
    if (!lu.isInvertible())
        throw NumericError("influence matrix D is singular");
    report.first_order = lu.solve(report.N);
    return report;
}

template <UnivariateFamily Family>
InfluenceReport influence_first_order(const Family& family, const ParamVector& theta, const WeightSpec& spec,
    double y, const QuadratureConfig& q = {})
{
    return influence_first_order(model_population(family, theta, q), family, theta, spec, y, q);
}

// Second-order influence T''(y) at the model, for one-parameter families, with w''(0)
// substituted into the three integral groups of the second-order expansion.
template <UnivariateFamily Family>
InfluenceReport influence_second_order(const Family& family, const ParamVector& theta, const WeightSpec& spec,
    double y, const QuadratureConfig& q = {})
{
    require_parameter(family, theta);
    if (family.dimension() != 1)
        throw InvalidSpec("second-order influence is defined for one-parameter families");
    const Population g = model_population(family, theta, q);
    const double I = family.fisher_information(theta)(0, 0);
    const double uy = family.score(theta, y)(0);
    const double t1 = uy / I;
    const double w2 = weight_second_derivative_at_zero(spec);

    auto score = [&](double x) { return family.score(theta, x)(0); };
    auto score2 = [&](double x) {
        // second theta-derivative of the score by central differences of its jacobian
        const double hh = 1e-5 * std::max(1.0, std::abs(theta(0)));
        ParamVector up = theta, down = theta;
        up(0) += hh;
        down(0) -= hh;
        return (family.score_jacobian(up, x)(0, 0) - family.score_jacobian(down, x)(0, 0)) / (2 * hh);
    };
    auto groups = [&](double x) -> Eigen::Vector3d {
        const CdfPair m = family.cdf_and_survival(theta, x);
        const double u = score(x);
        Eigen::Vector3d out;
        if (m.cdf <= 0.5) {
            const double lam = x >= y ? 1.0 : 0.0;
            const double r = family.cdf_gradient(theta, x)(0) / m.cdf;
            out << u / m.cdf * (lam - m.cdf) * (lam - m.cdf), u * r * (lam - m.cdf), u * r * r * m.cdf;
        } else {
            const double lam = y >= x ? 1.0 : 0.0;
            const double r = family.survival_gradient(theta, x)(0) / m.survival;
            out << u / m.survival * (lam - m.survival) * (lam - m.survival), u * r * (lam - m.survival),
                u * r * r * m.survival;
        }
        return out;
    };
    const Eigen::Vector3d G = integrate_population(g, groups, {y, model_median(family, theta, g)}, q).value;
    const double Eu2 = integrate_population(g, score2, {}, q).value;
    const double du_y = family.score_jacobian(theta, y)(0, 0);

    const double bracket = w2 * G(0) + 2 * t1 * (-w2 * G(1) + du_y + I) + t1 * t1 * (Eu2 + w2 * G(2));
    InfluenceReport report;
    report.first_order = ParamVector::Constant(1, t1);
    report.D = Matrix::Constant(1, 1, I);
    report.N = ParamVector::Constant(1, uy);
    report.second_order = bracket / I;
    report.w2 = w2;
    return report;
}

struct BiasPoint {
    double epsilon;
    double first_order;  // epsilon T'
    double second_order; // epsilon T' + epsilon^2 T'' / 2
};

std::vector<BiasPoint> bias_curve(const InfluenceReport& report, const std::vector<double>& epsilons);

struct MixtureScan {
    std::vector<double> grid;
    std::vector<double> score;
    std::vector<double> roots;
};

// Roots in mu of the population weighted score under the N(mu, 1) model:
// integral of w(tau_m(x)) (x - mu) f_m(x) dx, bracketed on the grid and bisected to 1e-6.
MixtureScan mixture_root_scan(const ContaminationSpec& contamination, const WeightSpec& spec,
    const ResidualConfig& residual, const std::vector<double>& mu_grid, const QuadratureConfig& q = {});

double population_weighted_score(const Population& g, const WeightSpec& spec, const ResidualConfig& residual,
    double mu, const QuadratureConfig& q = {});

struct Ellipse {
    Vector2 center;
    double major = 0.0; // semi-axis lengths
    double minor = 0.0;
    double angle = 0.0; // radians, direction of the major axis, in (-pi/2, pi/2]
};

double chi_square2_quantile(double coverage);

Ellipse concentration_ellipse(const ParamVector& theta, double coverage);

std::vector<Vector2> ellipse_polyline(const Ellipse& e, int points = 181);

void write_bias_curve_csv(std::ostream& os, const std::vector<BiasPoint>& curve);
void write_scan_csv(std::ostream& os, const MixtureScan& scan);
void write_ellipse_csv(std::ostream& os, const std::vector<Vector2>& polyline);

} // namespace wle
