#include "wle/residuals.hpp"

#include "wle/special.hpp"

#include <algorithm>
#include <cmath>

namespace wle {

void ResidualConfig::validate() const
{
    if (!(p > 0 && p <= 0.5))
        throw InvalidSpec("residual tail fraction p must lie in (0, 0.5]");
    if (!(beta > 0) || !std::isfinite(beta))
        throw InvalidSpec("residual exponent beta must be positive");
}

EmpiricalFunctions::EmpiricalFunctions(std::vector<double> sample) : original_(std::move(sample))
{
    if (original_.empty())
        throw DomainError("empirical functions need at least one observation");
    sorted_ = original_;
    std::sort(sorted_.begin(), sorted_.end());
    std::vector<std::size_t> order(original_.size());
    for (std::size_t i = 0; i < order.size(); ++i)
        order[i] = i;
    std::stable_sort(order.begin(), order.end(),
        [this](std::size_t a, std::size_t b) { return original_[a] < original_[b]; });
    rank_.resize(order.size());
    for (std::size_t r = 0; r < order.size(); ++r)
        rank_[order[r]] = r + 1;
}

double EmpiricalFunctions::cdf_at(std::size_t i, TieRule ties) const
{
    if (ties == TieRule::sorted_rank)
        return static_cast<double>(rank_.at(i)) / static_cast<double>(rank_.size());
    return cdf(original_.at(i));
}

double EmpiricalFunctions::survival_at(std::size_t i, TieRule ties) const
{
    if (ties == TieRule::sorted_rank)
        return static_cast<double>(rank_.size() - rank_.at(i) + 1) / static_cast<double>(rank_.size());
    return survival(original_.at(i));
}

double EmpiricalFunctions::cdf(double x) const
{
    const auto it = std::upper_bound(sorted_.begin(), sorted_.end(), x);
    return static_cast<double>(it - sorted_.begin()) / static_cast<double>(sorted_.size());
}

double EmpiricalFunctions::survival(double x) const
{
    const auto it = std::lower_bound(sorted_.begin(), sorted_.end(), x);
    return static_cast<double>(sorted_.end() - it) / static_cast<double>(sorted_.size());
}

EmpiricalQuadrants::EmpiricalQuadrants(std::vector<Vector2> sample) : sample_(std::move(sample))
{
    if (sample_.empty())
        throw DomainError("empirical quadrants need at least one observation");
    at_obs_.reserve(sample_.size());
    for (const auto& p : sample_)
        at_obs_.push_back(at(p));
}

Quadrants EmpiricalQuadrants::at(const Vector2& p) const
{
    std::array<int, 4> c{0, 0, 0, 0};
    for (const auto& q : sample_) {
        const bool xl = q(0) <= p(0), xg = q(0) >= p(0);
        const bool yl = q(1) <= p(1), yg = q(1) >= p(1);
        c[0] += xl && yl;
        c[1] += xl && yg;
        c[2] += xg && yl;
        c[3] += xg && yg;
    }
    const double n = static_cast<double>(sample_.size());
    return {c[0] / n, c[1] / n, c[2] / n, c[3] / n};
}

namespace {

double ratio(double num, double den, double beta)
{
    return num / (beta == 1.0 ? den : std::pow(den, beta)) - 1.0;
}

} // namespace

double tau_from_functions_unchecked(const ResidualConfig& config, double Fn, double Sn, double F, double S)
{
    if (F <= config.p)
        return F > 0 ? ratio(Fn, F, config.beta) : INFINITY;
    if (F >= 1.0 - config.p)
        return S > 0 ? ratio(Sn, S, config.beta) : INFINITY;
    return 0.0;
}

double tau_from_functions(const ResidualConfig& config, double Fn, double Sn, double F, double S)
{
    if ((F <= config.p && !(F > 0)) || (F > config.p && F >= 1.0 - config.p && !(S > 0)))
        throw NumericError("residual undefined: model tail probability is zero at the observation");
    return tau_from_functions_unchecked(config, Fn, Sn, F, S);
}

int minimal_quadrant(const Quadrants& model)
{
    int best = 0;
    for (int j = 1; j < 4; ++j)
        if (model[j] < model[best])
            best = j;
    return best;
}

double tau_bivariate(const ResidualConfig& config, const EmpiricalQuadrants& empirical,
    const BivariateNormalFamily& family, const ParamVector& theta, const Vector2& point)
{
    config.validate();
    const Quadrants model = family.quadrant_probabilities(theta, point);
    const int j = minimal_quadrant(model);
    if (!(model[j] >= 1e-300))
        throw NumericError("bivariate residual undefined: minimal quadrant probability below 1e-300");
    return ratio(empirical.at(point)[j], model[j], config.beta);
}

double tau_regression(const ResidualConfig& config, const EmpiricalFunctions& standardized, double z)
{
    config.validate();
    if (!std::isfinite(z))
        throw DomainError("regression residual must be finite");
    return tau_from_functions(config, standardized.cdf(z), standardized.survival(z), normal_cdf(z), normal_sf(z));
}

std::vector<double> standardized_residuals(const LinearRegressionFamily& family, const ParamVector& theta,
    const std::vector<RegressionPoint>& sample)
{
    require_parameter(family, theta);
    std::vector<double> z(sample.size());
    for (std::size_t i = 0; i < sample.size(); ++i)
        z[i] = family.standardized(theta, sample[i]);
    return z;
}

Eigen::VectorXd residual_vector(const ResidualConfig& config, const EmpiricalQuadrants& empirical,
    const BivariateNormalFamily& family, const ParamVector& theta, const std::vector<Vector2>& sample)
{
    Eigen::VectorXd tau(static_cast<Eigen::Index>(sample.size()));
    for (std::size_t i = 0; i < sample.size(); ++i) {
        const Quadrants model = family.quadrant_probabilities(theta, sample[i]);
        const int j = minimal_quadrant(model);
        tau(i) = model[j] > 0 ? ratio(empirical.at_observation(i)[j], model[j], config.beta) : INFINITY;
    }
    return tau;
}

Eigen::VectorXd residual_vector(const ResidualConfig& config, const LinearRegressionFamily& family,
    const ParamVector& theta, const std::vector<RegressionPoint>& sample)
{
    const std::vector<double> z = standardized_residuals(family, theta, sample);
    const EmpiricalFunctions empirical(z);
    Eigen::VectorXd tau(static_cast<Eigen::Index>(sample.size()));
    for (std::size_t i = 0; i < sample.size(); ++i) {
        tau(i) = tau_from_functions_unchecked(config, empirical.cdf_at(i, config.ties),
            empirical.survival_at(i, config.ties), normal_cdf(z[i]), normal_sf(z[i]));
    }
    return tau;
}

} // namespace wle
