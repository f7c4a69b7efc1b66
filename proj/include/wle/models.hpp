#pragma once

#include "wle/core.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <string_view>
#include <vector>

namespace wle {

struct RegressionPoint {
    double x;
    double y;
};

// Central differences with step h = 1e-6 * max(1, |theta_j|) per component.
template <class F>
ParamVector finite_difference_gradient(F&& f, const ParamVector& theta)
{
    ParamVector g(theta.size());
    for (Eigen::Index j = 0; j < theta.size(); ++j) {
        const double h = 1e-6 * std::max(1.0, std::abs(theta(j)));
        ParamVector up = theta, down = theta;
        up(j) += h;
        down(j) -= h;
        g(j) = (f(up) - f(down)) / (2 * h);
    }
    return g;
}

// Jacobian of a vector-valued function, columns indexed by theta component.
template <class F>
Matrix finite_difference_jacobian(F&& f, const ParamVector& theta)
{
    const ParamVector f0 = f(theta);
    Matrix J(f0.size(), theta.size());
    for (Eigen::Index j = 0; j < theta.size(); ++j) {
        const double h = 1e-6 * std::max(1.0, std::abs(theta(j)));
        ParamVector up = theta, down = theta;
        up(j) += h;
        down(j) -= h;
        J.col(j) = (f(up) - f(down)) / (2 * h);
    }
    return J;
}

class PoissonFamily {
public:
    using Observation = double;
    static constexpr FamilyKind kind = FamilyKind::univariate;
    static constexpr Support support = Support::lattice;
    static constexpr bool discrete = true;

    std::string_view name() const { return "poisson"; }
    int dimension() const { return 1; }
    std::vector<std::string> parameter_names() const { return {"theta"}; }
    std::string_view constraint() const { return "theta > 0"; }

    bool in_parameter_space(const ParamVector& theta) const;
    bool in_support(double x) const;

    double log_density(const ParamVector& theta, double x) const;
    ParamVector score(const ParamVector& theta, double x) const;
    Matrix score_jacobian(const ParamVector& theta, double x) const;
    CdfPair cdf_and_survival(const ParamVector& theta, double x) const;
    ParamVector cdf_gradient(const ParamVector& theta, double x) const;
    ParamVector survival_gradient(const ParamVector& theta, double x) const;
    Matrix fisher_information(const ParamVector& theta) const;

    ParamVector weighted_closed_form(const std::vector<double>& sample, const Eigen::VectorXd& w) const;
    ParamVector mle(const std::vector<double>& sample) const;
};

// Normal with unknown mean and variance, parameters (mu, sigma^2).
class NormalFamily {
public:
    using Observation = double;
    static constexpr FamilyKind kind = FamilyKind::univariate;
    static constexpr Support support = Support::real_line;
    static constexpr bool discrete = false;

    std::string_view name() const { return "normal"; }
    int dimension() const { return 2; }
    std::vector<std::string> parameter_names() const { return {"mu", "sigma2"}; }
    std::string_view constraint() const { return "sigma2 > 0"; }

    bool in_parameter_space(const ParamVector& theta) const;
    bool in_support(double x) const;

    double log_density(const ParamVector& theta, double x) const;
    ParamVector score(const ParamVector& theta, double x) const;
    Matrix score_jacobian(const ParamVector& theta, double x) const;
    CdfPair cdf_and_survival(const ParamVector& theta, double x) const;
    ParamVector cdf_gradient(const ParamVector& theta, double x) const;
    ParamVector survival_gradient(const ParamVector& theta, double x) const;
    Matrix fisher_information(const ParamVector& theta) const;

    ParamVector weighted_closed_form(const std::vector<double>& sample, const Eigen::VectorXd& w) const;
    ParamVector mle(const std::vector<double>& sample) const;
};

// Normal with known variance; the single parameter is the mean.
class NormalLocationFamily {
public:
    using Observation = double;
    static constexpr FamilyKind kind = FamilyKind::univariate;
    static constexpr Support support = Support::real_line;
    static constexpr bool discrete = false;

    explicit NormalLocationFamily(double variance = 1.0);

    std::string_view name() const { return "normal_location"; }
    int dimension() const { return 1; }
    std::vector<std::string> parameter_names() const { return {"mu"}; }
    std::string_view constraint() const { return "none"; }
    double variance() const { return variance_; }

    bool in_parameter_space(const ParamVector& theta) const;
    bool in_support(double x) const;

    double log_density(const ParamVector& theta, double x) const;
    ParamVector score(const ParamVector& theta, double x) const;
    Matrix score_jacobian(const ParamVector& theta, double x) const;
    CdfPair cdf_and_survival(const ParamVector& theta, double x) const;
    ParamVector cdf_gradient(const ParamVector& theta, double x) const;
    ParamVector survival_gradient(const ParamVector& theta, double x) const;
    Matrix fisher_information(const ParamVector& theta) const;

    ParamVector weighted_closed_form(const std::vector<double>& sample, const Eigen::VectorXd& w) const;
    ParamVector mle(const std::vector<double>& sample) const;

private:
    double variance_;
};

// Exponential with rate lambda.
class ExponentialFamily {
public:
    using Observation = double;
    static constexpr FamilyKind kind = FamilyKind::univariate;
    static constexpr Support support = Support::half_line;
    static constexpr bool discrete = false;

    std::string_view name() const { return "exponential"; }
    int dimension() const { return 1; }
    std::vector<std::string> parameter_names() const { return {"lambda"}; }
    std::string_view constraint() const { return "lambda > 0"; }

    bool in_parameter_space(const ParamVector& theta) const;
    bool in_support(double x) const;

    double log_density(const ParamVector& theta, double x) const;
    ParamVector score(const ParamVector& theta, double x) const;
    Matrix score_jacobian(const ParamVector& theta, double x) const;
    CdfPair cdf_and_survival(const ParamVector& theta, double x) const;
    ParamVector cdf_gradient(const ParamVector& theta, double x) const;
    ParamVector survival_gradient(const ParamVector& theta, double x) const;
    Matrix fisher_information(const ParamVector& theta) const;

    ParamVector weighted_closed_form(const std::vector<double>& sample, const Eigen::VectorXd& w) const;
    ParamVector mle(const std::vector<double>& sample) const;
};

enum class CovarianceDivisor { weight_sum, weight_sum_minus_one };

// Quadrant probabilities at a point, in the fixed order ll, lg, gl, gg
// (l = "<=", g = ">=" for the first and second coordinate).
using Quadrants = std::array<double, 4>;

// Bivariate normal, parameters (mu1, mu2, sigma1^2, sigma2^2, rho).
class BivariateNormalFamily {
public:
    using Observation = Vector2;
    static constexpr FamilyKind kind = FamilyKind::bivariate;
    static constexpr Support support = Support::plane;
    static constexpr bool discrete = false;

    explicit BivariateNormalFamily(CovarianceDivisor divisor = CovarianceDivisor::weight_sum)
        : divisor_(divisor)
    {
    }

    std::string_view name() const { return "bivariate_normal"; }
    int dimension() const { return 5; }
    std::vector<std::string> parameter_names() const { return {"mu1", "mu2", "sigma1_2", "sigma2_2", "rho"}; }
    std::string_view constraint() const { return "sigma1_2 > 0, sigma2_2 > 0, |rho| < 1"; }
    CovarianceDivisor divisor() const { return divisor_; }

    bool in_parameter_space(const ParamVector& theta) const;
    bool in_support(const Vector2& p) const;

    double log_density(const ParamVector& theta, const Vector2& p) const;
    ParamVector score(const ParamVector& theta, const Vector2& p) const;
    Matrix score_jacobian(const ParamVector& theta, const Vector2& p) const;
    Quadrants quadrant_probabilities(const ParamVector& theta, const Vector2& p) const;
    Matrix fisher_information(const ParamVector& theta) const;

    ParamVector weighted_closed_form(const std::vector<Vector2>& sample, const Eigen::VectorXd& w) const;
    ParamVector mle(const std::vector<Vector2>& sample) const;

    static Eigen::Matrix2d covariance(const ParamVector& theta);
    static ParamVector from_moments(const Vector2& mean, const Eigen::Matrix2d& cov);

private:
    CovarianceDivisor divisor_;
};

// y | x ~ N(beta0 + beta1 x, sigma^2), parameters (beta0, beta1, sigma).
// The x values are fixed covariates; only y is random.
class LinearRegressionFamily {
public:
    using Observation = RegressionPoint;
    static constexpr FamilyKind kind = FamilyKind::regression;
    static constexpr Support support = Support::real_line;
    static constexpr bool discrete = false;

    LinearRegressionFamily() = default;
    // design enables fisher_information(theta), averaged over the covariates
    explicit LinearRegressionFamily(std::vector<double> design) : design_(std::move(design)) {}

    std::string_view name() const { return "regression"; }
    int dimension() const { return 3; }
    std::vector<std::string> parameter_names() const { return {"beta0", "beta1", "sigma"}; }
    std::string_view constraint() const { return "sigma > 0"; }

    bool in_parameter_space(const ParamVector& theta) const;
    bool in_support(const RegressionPoint& r) const;

    double standardized(const ParamVector& theta, const RegressionPoint& r) const;
    double log_density(const ParamVector& theta, const RegressionPoint& r) const;
    ParamVector score(const ParamVector& theta, const RegressionPoint& r) const;
    Matrix score_jacobian(const ParamVector& theta, const RegressionPoint& r) const;
    CdfPair cdf_and_survival(const ParamVector& theta, const RegressionPoint& r) const;
    ParamVector cdf_gradient(const ParamVector& theta, const RegressionPoint& r) const;
    ParamVector survival_gradient(const ParamVector& theta, const RegressionPoint& r) const;
    Matrix fisher_information(const ParamVector& theta, double x) const;
    Matrix fisher_information(const ParamVector& theta) const;

    ParamVector weighted_closed_form(const std::vector<RegressionPoint>& sample, const Eigen::VectorXd& w) const;
    ParamVector mle(const std::vector<RegressionPoint>& sample) const;

private:
    std::vector<double> design_;
};

template <class Family>
concept UnivariateFamily = Family::kind == FamilyKind::univariate;

template <class Family>
double density(const Family& family, const ParamVector& theta, const typename Family::Observation& x)
{
    return std::exp(family.log_density(theta, x));
}

// Throws DomainError unless theta lies in the family's parameter space.
template <class Family>
void require_parameter(const Family& family, const ParamVector& theta)
{
    if (theta.size() != family.dimension())
        throw DomainError(std::string(family.name()) + ": parameter has wrong dimension");
    if (!family.in_parameter_space(theta))
        throw DomainError(std::string(family.name()) + ": parameter outside " + std::string(family.constraint()));
}

template <class Family>
void require_sample(const Family& family, const std::vector<typename Family::Observation>& sample)
{
    if (sample.empty())
        throw DomainError(std::string(family.name()) + ": empty sample");
    for (const auto& x : sample)
        if (!family.in_support(x))
            throw DomainError(std::string(family.name()) + ": observation outside support");
}

} // namespace wle
