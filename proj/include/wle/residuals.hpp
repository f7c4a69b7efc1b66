#pragma once

#include "wle/core.hpp"
#include "wle/models.hpp"

#include <vector>

namespace wle {

// How the empirical functions treat tied observations at sample points.
// count: F_n(x) = #{X_j <= x}/n, S_n(x) = #{X_j >= x}/n.
// sorted_rank: the i-th order statistic gets F_n = i/n and S_n = (n - i + 1)/n,
// ties ordered by their position in the sample.
enum class TieRule { count, sorted_rank };

struct ResidualConfig {
    double p = 0.5;    // tail fraction eligible for downweighting
    double beta = 1.0; // exponent on the model function in the denominator
    TieRule ties = TieRule::count;

    void validate() const;
};

// F_n(x) = #{X_i <= x}/n and S_n(x) = #{X_i >= x}/n over a sorted copy of the sample.
class EmpiricalFunctions {
public:
    explicit EmpiricalFunctions(std::vector<double> sample);

    double cdf(double x) const;
    double survival(double x) const;
    // values at the i-th observation (original sample order) under a tie rule
    double cdf_at(std::size_t i, TieRule ties) const;
    double survival_at(std::size_t i, TieRule ties) const;
    std::size_t size() const { return sorted_.size(); }
    const std::vector<double>& sorted() const { return sorted_; }

private:
    std::vector<double> original_;
    std::vector<double> sorted_;
    std::vector<std::size_t> rank_; // 1-based stable rank of each original observation
};

// Empirical quadrant masses P_ll,n, P_lg,n, P_gl,n, P_gg,n.
class EmpiricalQuadrants {
public:
    explicit EmpiricalQuadrants(std::vector<Vector2> sample);

    Quadrants at(const Vector2& p) const;
    // precomputed at the i-th sample point
    const Quadrants& at_observation(std::size_t i) const { return at_obs_[i]; }
    std::size_t size() const { return sample_.size(); }

private:
    std::vector<Vector2> sample_;
    std::vector<Quadrants> at_obs_;
};

// Three-branch residual from empirical (Fn, Sn) and model (F, S) values:
// Fn/F^beta - 1 if F <= p, Sn/S^beta - 1 if F >= 1 - p, 0 otherwise.
// Throws NumericError when the chosen model tail is exactly 0.
double tau_from_functions(const ResidualConfig& config, double Fn, double Sn, double F, double S);

// Same rule, but an exactly-zero model tail gives +infinity (weight 0) instead of throwing.
double tau_from_functions_unchecked(const ResidualConfig& config, double Fn, double Sn, double F, double S);

// Index into Quadrants of the smallest model probability; ties go to the earlier of ll, lg, gl, gg.
int minimal_quadrant(const Quadrants& model);

template <UnivariateFamily Family>
double tau_univariate(const ResidualConfig& config, const EmpiricalFunctions& empirical,
    const Family& family, const ParamVector& theta, double x)
{
    config.validate();
    if (!family.in_support(x))
        throw DomainError(std::string(family.name()) + ": observation outside support");
    const CdfPair model = family.cdf_and_survival(theta, x);
    return tau_from_functions(config, empirical.cdf(x), empirical.survival(x), model.cdf, model.survival);
}

double tau_bivariate(const ResidualConfig& config, const EmpiricalQuadrants& empirical,
    const BivariateNormalFamily& family, const ParamVector& theta, const Vector2& point);

// z-residual form: the model function is the standard normal and the empirical
// functions are built from standardized residuals at the current parameter.
double tau_regression(const ResidualConfig& config, const EmpiricalFunctions& standardized_residuals, double z);

std::vector<double> standardized_residuals(const LinearRegressionFamily& family, const ParamVector& theta,
    const std::vector<RegressionPoint>& sample);

// Residuals at every sample point, as the solver consumes them. Observations
// infinitely deep in a model tail get +infinity rather than an exception.
template <UnivariateFamily Family>
Eigen::VectorXd residual_vector(const ResidualConfig& config, const EmpiricalFunctions& empirical,
    const Family& family, const ParamVector& theta, const std::vector<double>& sample)
{
    Eigen::VectorXd tau(static_cast<Eigen::Index>(sample.size()));
    for (std::size_t i = 0; i < sample.size(); ++i) {
        const CdfPair model = family.cdf_and_survival(theta, sample[i]);
        tau(i) = tau_from_functions_unchecked(config, empirical.cdf_at(i, config.ties),
            empirical.survival_at(i, config.ties), model.cdf, model.survival);
    }
    return tau;
}

Eigen::VectorXd residual_vector(const ResidualConfig& config, const EmpiricalQuadrants& empirical,
    const BivariateNormalFamily& family, const ParamVector& theta, const std::vector<Vector2>& sample);

Eigen::VectorXd residual_vector(const ResidualConfig& config, const LinearRegressionFamily& family,
    const ParamVector& theta, const std::vector<RegressionPoint>& sample);

} // namespace wle
