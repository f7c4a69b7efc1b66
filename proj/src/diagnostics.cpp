#include "wle/diagnostics.hpp"

#include "wle/special.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <iomanip>

namespace wle {

Population normal_population(double mean, double sd, const QuadratureConfig& q)
{
    Population g;
    g.cdf = [=](double x) { return normal_cdf((x - mean) / sd); };
    g.survival = [=](double x) { return normal_sf((x - mean) / sd); };
    g.density = [=](double x) { return normal_pdf((x - mean) / sd) / sd; };
    g.lower = mean - q.truncation * sd;
    g.upper = mean + q.truncation * sd;
    g.breakpoints = {mean};
    return g;
}

Population model_population(const PoissonFamily& family, const ParamVector& theta, const QuadratureConfig&)
{
    require_parameter(family, theta);
    const double t = theta(0);
    Population g;
    g.discrete = true;
    g.cdf = [=](double x) { return poisson_cdf(static_cast<long>(std::floor(x)), t); };
    g.survival = [=](double x) { return poisson_sf(static_cast<long>(std::ceil(x)), t); };
    g.density = [=](double x) { return poisson_pmf(static_cast<long>(x), t); };
    // sum until the remaining tail is below 1e-12, never fewer than 200 terms
    long k = static_cast<long>(t);
    while (poisson_sf(k + 1, t) > 1e-12)
        ++k;
    g.lower = 0.0;
    g.upper = static_cast<double>(std::max(k, 200L));
    return g;
}

Population model_population(const NormalFamily& family, const ParamVector& theta, const QuadratureConfig& q)
{
    require_parameter(family, theta);
    return normal_population(theta(0), std::sqrt(theta(1)), q);
}

Population model_population(const NormalLocationFamily& family, const ParamVector& theta, const QuadratureConfig& q)
{
    require_parameter(family, theta);
    return normal_population(theta(0), std::sqrt(family.variance()), q);
}

Population model_population(const ExponentialFamily& family, const ParamVector& theta, const QuadratureConfig&)
{
    require_parameter(family, theta);
    const double lam = theta(0);
    Population g;
    g.cdf = [=](double x) { return x <= 0 ? 0.0 : -std::expm1(-lam * x); };
    g.survival = [=](double x) { return x <= 0 ? 1.0 : std::exp(-lam * x); };
    g.density = [=](double x) { return x < 0 ? 0.0 : lam * std::exp(-lam * x); };
    g.lower = 0.0;
    g.upper = 30.0 / lam; // tail mass e^-30
    g.breakpoints = {std::log(2.0) / lam};
    return g;
}

Population mix(const Population& base, const Population& contaminant, double epsilon)
{
    if (base.discrete != contaminant.discrete)
        throw InvalidSpec("cannot mix discrete and continuous populations");
    Population g;
    g.discrete = base.discrete;
    g.cdf = [=](double x) { return (1 - epsilon) * base.cdf(x) + epsilon * contaminant.cdf(x); };
    g.survival = [=](double x) { return (1 - epsilon) * base.survival(x) + epsilon * contaminant.survival(x); };
    g.density = [=](double x) { return (1 - epsilon) * base.density(x) + epsilon * contaminant.density(x); };
    g.lower = std::min(base.lower, contaminant.lower);
    g.upper = std::max(base.upper, contaminant.upper);
    g.breakpoints = base.breakpoints;
    g.breakpoints.insert(g.breakpoints.end(), contaminant.breakpoints.begin(), contaminant.breakpoints.end());
    return g;
}

void ContaminationSpec::validate() const
{
    if (!(epsilon >= 0 && epsilon <= 1))
        throw InvalidSpec("contamination level must lie in [0, 1]");
    if (point.has_value() == contaminant.has_value())
        throw InvalidSpec("contamination needs exactly one of a point or a contaminating component");
}

Population ContaminationSpec::mixture() const
{
    validate();
    if (!contaminant)
        throw InvalidSpec("point-mass contamination has no density");
    return mix(base, *contaminant, epsilon);
}

std::vector<BiasPoint> bias_curve(const InfluenceReport& report, const std::vector<double>& epsilons)
{
    const double t1 = report.first_order(0);
    std::vector<BiasPoint> out;
    out.reserve(epsilons.size());
    for (double e : epsilons)
        out.push_back({e, e * t1, e * t1 + 0.5 * e * e * report.second_order});
    return out;
}

double population_weighted_score(const Population& g, const WeightSpec& spec, const ResidualConfig& residual,
    double mu, const QuadratureConfig& q)
{
    auto integrand = [&](double x) {
        const double z = x - mu;
        const double tau = tau_from_functions_unchecked(residual, g.cdf(x), g.survival(x), normal_cdf(z), normal_sf(z));
        return weight(spec, tau) * z;
    };
    std::vector<double> breaks{mu};
    Population wide = g;
    wide.lower = std::min(g.lower, mu - q.truncation);
    wide.upper = std::max(g.upper, mu + q.truncation);
    return integrate_population(wide, integrand, breaks, q).value;
}

MixtureScan mixture_root_scan(const ContaminationSpec& contamination, const WeightSpec& spec,
    const ResidualConfig& residual, const std::vector<double>& mu_grid, const QuadratureConfig& q)
{
    residual.validate();
    validate(spec);
    for (std::size_t i = 1; i < mu_grid.size(); ++i)
        if (!(mu_grid[i] > mu_grid[i - 1]))
            throw InvalidSpec("mu grid must be strictly increasing");
    const Population g = contamination.epsilon == 0.0 ? contamination.base : contamination.mixture();
    auto score = [&](double mu) { return population_weighted_score(g, spec, residual, mu, q); };

    MixtureScan scan;
    scan.grid = mu_grid;
    scan.score.reserve(mu_grid.size());
    for (double mu : mu_grid)
        scan.score.push_back(score(mu));

    for (std::size_t i = 0; i < mu_grid.size(); ++i) {
        const double s = scan.score[i];
        if (s == 0.0) {
            scan.roots.push_back(mu_grid[i]);
            continue;
        }
        if (i + 1 == mu_grid.size())
            break;
        const double t = scan.score[i + 1];
        if (t == 0.0 || (s > 0) == (t > 0))
            continue;
        double lo = mu_grid[i], hi = mu_grid[i + 1], slo = s;
        while (hi - lo > 1e-6) {
            const double mid = 0.5 * (lo + hi);
            const double sm = score(mid);
            if (sm == 0.0) {
                lo = hi = mid;
                break;
            }
            if ((sm > 0) == (slo > 0)) {
                lo = mid;
                slo = sm;
            } else {
                hi = mid;
            }
        }
        scan.roots.push_back(0.5 * (lo + hi));
    }
    return scan;
}

double chi_square2_quantile(double coverage)
{
    if (!(coverage >= 0 && coverage < 1))
        throw DomainError("coverage must lie in [0, 1)");
    return -2.0 * std::log1p(-coverage);
}

Ellipse concentration_ellipse(const ParamVector& theta, double coverage)
{
    BivariateNormalFamily family;
    require_parameter(family, theta);
    const Eigen::Matrix2d S = BivariateNormalFamily::covariance(theta);
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(S);
    if (es.info() != Eigen::Success || !(es.eigenvalues()(0) > 0))
        throw DomainError("covariance is not positive definite");
    const double c = std::sqrt(chi_square2_quantile(coverage));
    Ellipse e;
    e.center = Vector2(theta(0), theta(1));
    e.major = c * std::sqrt(es.eigenvalues()(1));
    e.minor = c * std::sqrt(es.eigenvalues()(0));
    const Vector2 v = es.eigenvectors().col(1);
    double angle = std::atan2(v(1), v(0));
    if (angle <= -pi / 2)
        angle += pi;
    else if (angle > pi / 2)
        angle -= pi;
    // equal variances with zero correlation: no preferred direction
    if (std::abs(es.eigenvalues()(1) - es.eigenvalues()(0)) <= 1e-14 * es.eigenvalues()(1))
        angle = 0.0;
    e.angle = angle;
    return e;
}

std::vector<Vector2> ellipse_polyline(const Ellipse& e, int points)
{
    std::vector<Vector2> out;
    out.reserve(static_cast<std::size_t>(points));
    const double ca = std::cos(e.angle), sa = std::sin(e.angle);
    for (int i = 0; i < points; ++i) {
        const double t = 2 * pi * i / (points - 1);
        const double a = e.major * std::cos(t), b = e.minor * std::sin(t);
        out.emplace_back(e.center(0) + ca * a - sa * b, e.center(1) + sa * a + ca * b);
    }
    return out;
}

void write_bias_curve_csv(std::ostream& os, const std::vector<BiasPoint>& curve)
{
    os << "epsilon,first_order,second_order\n" << std::setprecision(10);
    for (const auto& p : curve)
        os << p.epsilon << ',' << p.first_order << ',' << p.second_order << '\n';
}

void write_scan_csv(std::ostream& os, const MixtureScan& scan)
{
    os << "mu,score\n" << std::setprecision(10);
    for (std::size_t i = 0; i < scan.grid.size(); ++i)
        os << scan.grid[i] << ',' << scan.score[i] << '\n';
}

void write_ellipse_csv(std::ostream& os, const std::vector<Vector2>& polyline)
{
    os << "x,y\n" << std::setprecision(10);
    for (const auto& p : polyline)
        os << p(0) << ',' << p(1) << '\n';
}

} // namespace wle
