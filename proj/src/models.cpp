#include "wle/models.hpp"

#include "wle/special.hpp"

#include <cmath>

namespace wle {

namespace {

constexpr double tiny_weight = 1e-12;

double weight_total(const Eigen::VectorXd& w, std::size_t n, std::string_view who)
{
    if (static_cast<std::size_t>(w.size()) != n)
        throw DomainError(std::string(who) + ": weight vector length differs from sample size");
    if ((w.array() < 0).any() || !w.allFinite())
        throw DomainError(std::string(who) + ": weights must be finite and nonnegative");
    const double total = w.sum();
    if (!(total >= tiny_weight))
        throw DegenerateError(std::string(who) + ": total weight below 1e-12");
    return total;
}

double weighted_mean(const std::vector<double>& x, const Eigen::VectorXd& w, double total)
{
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i)
        s += w(i) * x[i];
    return s / total;
}

Eigen::VectorXd ones(std::size_t n) { return Eigen::VectorXd::Ones(static_cast<Eigen::Index>(n)); }

ParamVector scalar(double v) { return ParamVector::Constant(1, v); }

Matrix scalar_matrix(double v) { return Matrix::Constant(1, 1, v); }

} // namespace

// ---------------------------------------------------------------- Poisson

bool PoissonFamily::in_parameter_space(const ParamVector& theta) const
{
    return theta.size() == 1 && std::isfinite(theta(0)) && theta(0) > 0;
}

bool PoissonFamily::in_support(double x) const { return x >= 0 && std::isfinite(x) && x == std::floor(x); }

double PoissonFamily::log_density(const ParamVector& theta, double x) const
{
    require_parameter(*this, theta);
    if (!in_support(x))
        return -INFINITY;
    return poisson_log_pmf(static_cast<long>(x), theta(0));
}

ParamVector PoissonFamily::score(const ParamVector& theta, double x) const
{
    require_parameter(*this, theta);
    if (!in_support(x))
        throw DomainError("poisson: observation outside support");
    return scalar(x / theta(0) - 1.0);
}

Matrix PoissonFamily::score_jacobian(const ParamVector& theta, double x) const
{
    require_parameter(*this, theta);
    return scalar_matrix(-x / (theta(0) * theta(0)));
}

CdfPair PoissonFamily::cdf_and_survival(const ParamVector& theta, double x) const
{
    require_parameter(*this, theta);
    if (!in_support(x))
        throw DomainError("poisson: observation outside support");
    const long k = static_cast<long>(x);
    return {poisson_cdf(k, theta(0)), poisson_sf(k, theta(0))};
}

ParamVector PoissonFamily::cdf_gradient(const ParamVector& theta, double x) const
{
    require_parameter(*this, theta);
    // d/dtheta P(X <= k) = -P(X = k)
    return scalar(-poisson_pmf(static_cast<long>(x), theta(0)));
}

ParamVector PoissonFamily::survival_gradient(const ParamVector& theta, double x) const
{
    require_parameter(*this, theta);
    const long k = static_cast<long>(x);
    return scalar(k <= 0 ? 0.0 : poisson_pmf(k - 1, theta(0)));
}

Matrix PoissonFamily::fisher_information(const ParamVector& theta) const
{
    require_parameter(*this, theta);
    return scalar_matrix(1.0 / theta(0));
}

ParamVector PoissonFamily::weighted_closed_form(const std::vector<double>& sample, const Eigen::VectorXd& w) const
{
    require_sample(*this, sample);
    const double total = weight_total(w, sample.size(), name());
    const double m = weighted_mean(sample, w, total);
    if (!(m > 0))
        throw DegenerateError("poisson: weighted mean is zero");
    return scalar(m);
}

ParamVector PoissonFamily::mle(const std::vector<double>& sample) const
{
    return weighted_closed_form(sample, ones(sample.size()));
}

// ---------------------------------------------------------------- Normal

bool NormalFamily::in_parameter_space(const ParamVector& theta) const
{
    return theta.size() == 2 && std::isfinite(theta(0)) && std::isfinite(theta(1)) && theta(1) > 0;
}

bool NormalFamily::in_support(double x) const { return std::isfinite(x); }

double NormalFamily::log_density(const ParamVector& theta, double x) const
{
    require_parameter(*this, theta);
    const double d = x - theta(0);
    return -0.5 * std::log(2 * pi * theta(1)) - d * d / (2 * theta(1));
}

ParamVector NormalFamily::score(const ParamVector& theta, double x) const
{
    require_parameter(*this, theta);
    if (!in_support(x))
        throw DomainError("normal: observation outside support");
    const double d = x - theta(0), v = theta(1);
    ParamVector u(2);
    u << d / v, (d * d - v) / (2 * v * v);
    return u;
}

Matrix NormalFamily::score_jacobian(const ParamVector& theta, double x) const
{
    require_parameter(*this, theta);
    const double d = x - theta(0), v = theta(1);
    Matrix J(2, 2);
    J << -1 / v, -d / (v * v), -d / (v * v), 1 / (2 * v * v) - d * d / (v * v * v);
    return J;
}

CdfPair NormalFamily::cdf_and_survival(const ParamVector& theta, double x) const
{
    require_parameter(*this, theta);
    const double z = (x - theta(0)) / std::sqrt(theta(1));
    return {normal_cdf(z), normal_sf(z)};
}

ParamVector NormalFamily::cdf_gradient(const ParamVector& theta, double x) const
{
    require_parameter(*this, theta);
    const double s = std::sqrt(theta(1));
    const double z = (x - theta(0)) / s;
    const double f = normal_pdf(z);
    ParamVector g(2);
    g << -f / s, -f * z / (2 * theta(1));
    return g;
}

ParamVector NormalFamily::survival_gradient(const ParamVector& theta, double x) const
{
    return -cdf_gradient(theta, x);
}

Matrix NormalFamily::fisher_information(const ParamVector& theta) const
{
    require_parameter(*this, theta);
    const double v = theta(1);
    Matrix I = Matrix::Zero(2, 2);
    I(0, 0) = 1 / v;
    I(1, 1) = 1 / (2 * v * v);
    return I;
}

ParamVector NormalFamily::weighted_closed_form(const std::vector<double>& sample, const Eigen::VectorXd& w) const
{
    const double total = weight_total(w, sample.size(), name());
    const double m = weighted_mean(sample, w, total);
    double ss = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i)
        ss += w(i) * (sample[i] - m) * (sample[i] - m);
    const double v = ss / total;
    if (!(v > 0))
        throw DegenerateError("normal: weighted variance is zero");
    ParamVector theta(2);
    theta << m, v;
    return theta;
}

ParamVector NormalFamily::mle(const std::vector<double>& sample) const
{
    return weighted_closed_form(sample, ones(sample.size()));
}

// ---------------------------------------------------------------- Normal location

NormalLocationFamily::NormalLocationFamily(double variance) : variance_(variance)
{
    if (!(variance > 0) || !std::isfinite(variance))
        throw DomainError("normal_location: variance must be positive");
}

bool NormalLocationFamily::in_parameter_space(const ParamVector& theta) const
{
    return theta.size() == 1 && std::isfinite(theta(0));
}

bool NormalLocationFamily::in_support(double x) const { return std::isfinite(x); }

double NormalLocationFamily::log_density(const ParamVector& theta, double x) const
{
    require_parameter(*this, theta);
    const double d = x - theta(0);
    return -0.5 * std::log(2 * pi * variance_) - d * d / (2 * variance_);
}

ParamVector NormalLocationFamily::score(const ParamVector& theta, double x) const
{
    require_parameter(*this, theta);
    if (!in_support(x))
        throw DomainError("normal_location: observation outside support");
    return scalar((x - theta(0)) / variance_);
}

Matrix NormalLocationFamily::score_jacobian(const ParamVector& theta, double) const
{
    require_parameter(*this, theta);
    return scalar_matrix(-1 / variance_);
}

CdfPair NormalLocationFamily::cdf_and_survival(const ParamVector& theta, double x) const
{
    require_parameter(*this, theta);
    const double z = (x - theta(0)) / std::sqrt(variance_);
    return {normal_cdf(z), normal_sf(z)};
}

ParamVector NormalLocationFamily::cdf_gradient(const ParamVector& theta, double x) const
{
    require_parameter(*this, theta);
    const double s = std::sqrt(variance_);
    return scalar(-normal_pdf((x - theta(0)) / s) / s);
}

ParamVector NormalLocationFamily::survival_gradient(const ParamVector& theta, double x) const
{
    return -cdf_gradient(theta, x);
}

Matrix NormalLocationFamily::fisher_information(const ParamVector& theta) const
{
    require_parameter(*this, theta);
    return scalar_matrix(1 / variance_);
}

ParamVector NormalLocationFamily::weighted_closed_form(const std::vector<double>& sample, const Eigen::VectorXd& w) const
{
    const double total = weight_total(w, sample.size(), name());
    return scalar(weighted_mean(sample, w, total));
}

ParamVector NormalLocationFamily::mle(const std::vector<double>& sample) const
{
    return weighted_closed_form(sample, ones(sample.size()));
}

// ---------------------------------------------------------------- Exponential

bool ExponentialFamily::in_parameter_space(const ParamVector& theta) const
{
    return theta.size() == 1 && std::isfinite(theta(0)) && theta(0) > 0;
}

bool ExponentialFamily::in_support(double x) const { return x >= 0 && std::isfinite(x); }

double ExponentialFamily::log_density(const ParamVector& theta, double x) const
{
    require_parameter(*this, theta);
    if (!in_support(x))
        return -INFINITY;
    return std::log(theta(0)) - theta(0) * x;
}

ParamVector ExponentialFamily::score(const ParamVector& theta, double x) const
{
    require_parameter(*this, theta);
    if (!in_support(x))
        throw DomainError("exponential: observation outside support");
    return scalar(1 / theta(0) - x);
}

Matrix ExponentialFamily::score_jacobian(const ParamVector& theta, double) const
{
    require_parameter(*this, theta);
    return scalar_matrix(-1 / (theta(0) * theta(0)));
}

CdfPair ExponentialFamily::cdf_and_survival(const ParamVector& theta, double x) const
{
    require_parameter(*this, theta);
    if (!in_support(x))
        throw DomainError("exponential: observation outside support");
    return {-std::expm1(-theta(0) * x), std::exp(-theta(0) * x)};
}

ParamVector ExponentialFamily::cdf_gradient(const ParamVector& theta, double x) const
{
    require_parameter(*this, theta);
    return scalar(x * std::exp(-theta(0) * x));
}

ParamVector ExponentialFamily::survival_gradient(const ParamVector& theta, double x) const
{
    return -cdf_gradient(theta, x);
}

Matrix ExponentialFamily::fisher_information(const ParamVector& theta) const
{
    require_parameter(*this, theta);
    return scalar_matrix(1 / (theta(0) * theta(0)));
}

ParamVector ExponentialFamily::weighted_closed_form(const std::vector<double>& sample, const Eigen::VectorXd& w) const
{
    require_sample(*this, sample);
    const double total = weight_total(w, sample.size(), name());
    const double m = weighted_mean(sample, w, total);
    if (!(m > 0))
        throw DegenerateError("exponential: weighted mean is zero");
    return scalar(1 / m);
}

ParamVector ExponentialFamily::mle(const std::vector<double>& sample) const
{
    return weighted_closed_form(sample, ones(sample.size()));
}

// ---------------------------------------------------------------- Bivariate normal

bool BivariateNormalFamily::in_parameter_space(const ParamVector& theta) const
{
    return theta.size() == 5 && theta.allFinite() && theta(2) > 0 && theta(3) > 0 && std::abs(theta(4)) < 1;
}

bool BivariateNormalFamily::in_support(const Vector2& p) const { return p.allFinite(); }

Eigen::Matrix2d BivariateNormalFamily::covariance(const ParamVector& theta)
{
    const double c = theta(4) * std::sqrt(theta(2) * theta(3));
    Eigen::Matrix2d S;
    S << theta(2), c, c, theta(3);
    return S;
}

ParamVector BivariateNormalFamily::from_moments(const Vector2& mean, const Eigen::Matrix2d& cov)
{
    ParamVector theta(5);
    theta << mean(0), mean(1), cov(0, 0), cov(1, 1), cov(0, 1) / std::sqrt(cov(0, 0) * cov(1, 1));
    return theta;
}

double BivariateNormalFamily::log_density(const ParamVector& theta, const Vector2& p) const
{
    require_parameter(*this, theta);
    const double r = theta(4), q = 1 - r * r;
    const double z1 = (p(0) - theta(0)) / std::sqrt(theta(2));
    const double z2 = (p(1) - theta(1)) / std::sqrt(theta(3));
    const double Q = z1 * z1 - 2 * r * z1 * z2 + z2 * z2;
    return -std::log(2 * pi) - 0.5 * std::log(theta(2) * theta(3) * q) - Q / (2 * q);
}

ParamVector BivariateNormalFamily::score(const ParamVector& theta, const Vector2& p) const
{
    require_parameter(*this, theta);
    if (!in_support(p))
        throw DomainError("bivariate_normal: observation outside support");
    const double s1 = std::sqrt(theta(2)), s2 = std::sqrt(theta(3));
    const double r = theta(4), q = 1 - r * r;
    const double z1 = (p(0) - theta(0)) / s1, z2 = (p(1) - theta(1)) / s2;
    const double Q = z1 * z1 - 2 * r * z1 * z2 + z2 * z2;
    ParamVector u(5);
    u(0) = (z1 - r * z2) / (s1 * q);
    u(1) = (z2 - r * z1) / (s2 * q);
    u(2) = -1 / (2 * theta(2)) + z1 * (z1 - r * z2) / (2 * theta(2) * q);
    u(3) = -1 / (2 * theta(3)) + z2 * (z2 - r * z1) / (2 * theta(3) * q);
    u(4) = r / q + z1 * z2 / q - Q * r / (q * q);
    return u;
}

Matrix BivariateNormalFamily::score_jacobian(const ParamVector& theta, const Vector2& p) const
{
    return finite_difference_jacobian([&](const ParamVector& t) { return score(t, p); }, theta);
}

Quadrants BivariateNormalFamily::quadrant_probabilities(const ParamVector& theta, const Vector2& p) const
{
    require_parameter(*this, theta);
    const double zx = (p(0) - theta(0)) / std::sqrt(theta(2));
    const double zy = (p(1) - theta(1)) / std::sqrt(theta(3));
    const double r = theta(4);
    return {bivariate_normal_upper(-zx, -zy, r), bivariate_normal_upper(-zx, zy, -r),
        bivariate_normal_upper(zx, -zy, -r), bivariate_normal_upper(zx, zy, r)};
}

Matrix BivariateNormalFamily::fisher_information(const ParamVector& theta) const
{
    require_parameter(*this, theta);
    // the score is quadratic in the data, so an 8-point Gauss-Hermite product rule is exact
    const QuadratureRule& gh = gauss_hermite_normal(8);
    const Eigen::Matrix2d L = covariance(theta).llt().matrixL();
    const Vector2 mu(theta(0), theta(1));
    Matrix I = Matrix::Zero(5, 5);
    for (std::size_t i = 0; i < gh.nodes.size(); ++i) {
        for (std::size_t j = 0; j < gh.nodes.size(); ++j) {
            const Vector2 p = mu + L * Vector2(gh.nodes[i], gh.nodes[j]);
            const ParamVector u = score(theta, p);
            I += gh.weights[i] * gh.weights[j] * (u * u.transpose());
        }
    }
    return 0.5 * (I + I.transpose());
}

ParamVector BivariateNormalFamily::weighted_closed_form(const std::vector<Vector2>& sample, const Eigen::VectorXd& w) const
{
    const double total = weight_total(w, sample.size(), name());
    Vector2 mean = Vector2::Zero();
    for (std::size_t i = 0; i < sample.size(); ++i)
        mean += w(i) * sample[i];
    mean /= total;
    Eigen::Matrix2d S = Eigen::Matrix2d::Zero();
    for (std::size_t i = 0; i < sample.size(); ++i) {
        const Vector2 d = sample[i] - mean;
        S += w(i) * d * d.transpose();
    }
    const double div = divisor_ == CovarianceDivisor::weight_sum ? total : total - 1;
    if (!(div > 0))
        throw DegenerateError("bivariate_normal: total weight too small for the covariance divisor");
    S /= div;
    if (!(S(0, 0) > 0) || !(S(1, 1) > 0))
        throw DegenerateError("bivariate_normal: weighted variance is zero");
    ParamVector theta = from_moments(mean, S);
    if (!(std::abs(theta(4)) < 1))
        throw DegenerateError("bivariate_normal: weighted correlation is +-1");
    return theta;
}

ParamVector BivariateNormalFamily::mle(const std::vector<Vector2>& sample) const
{
    return weighted_closed_form(sample, ones(sample.size()));
}

// ---------------------------------------------------------------- Regression

bool LinearRegressionFamily::in_parameter_space(const ParamVector& theta) const
{
    return theta.size() == 3 && theta.allFinite() && theta(2) > 0;
}

bool LinearRegressionFamily::in_support(const RegressionPoint& r) const
{
    return std::isfinite(r.x) && std::isfinite(r.y);
}

double LinearRegressionFamily::standardized(const ParamVector& theta, const RegressionPoint& r) const
{
    return (r.y - theta(0) - theta(1) * r.x) / theta(2);
}

double LinearRegressionFamily::log_density(const ParamVector& theta, const RegressionPoint& r) const
{
    require_parameter(*this, theta);
    const double z = standardized(theta, r);
    return -std::log(theta(2)) - 0.5 * std::log(2 * pi) - 0.5 * z * z;
}

ParamVector LinearRegressionFamily::score(const ParamVector& theta, const RegressionPoint& r) const
{
    require_parameter(*this, theta);
    if (!in_support(r))
        throw DomainError("regression: observation outside support");
    const double s = theta(2), z = standardized(theta, r);
    ParamVector u(3);
    u << z / s, r.x * z / s, (z * z - 1) / s;
    return u;
}

Matrix LinearRegressionFamily::score_jacobian(const ParamVector& theta, const RegressionPoint& r) const
{
    require_parameter(*this, theta);
    const double s2 = theta(2) * theta(2), z = standardized(theta, r), x = r.x;
    Matrix J(3, 3);
    J << -1, -x, -2 * z,
        -x, -x * x, -2 * x * z,
        -2 * z, -2 * x * z, 1 - 3 * z * z;
    return J / s2;
}

CdfPair LinearRegressionFamily::cdf_and_survival(const ParamVector& theta, const RegressionPoint& r) const
{
    require_parameter(*this, theta);
    const double z = standardized(theta, r);
    return {normal_cdf(z), normal_sf(z)};
}

ParamVector LinearRegressionFamily::cdf_gradient(const ParamVector& theta, const RegressionPoint& r) const
{
    require_parameter(*this, theta);
    const double z = standardized(theta, r), f = normal_pdf(z) / theta(2);
    ParamVector g(3);
    g << -f, -f * r.x, -f * z;
    return g;
}

ParamVector LinearRegressionFamily::survival_gradient(const ParamVector& theta, const RegressionPoint& r) const
{
    return -cdf_gradient(theta, r);
}

Matrix LinearRegressionFamily::fisher_information(const ParamVector& theta, double x) const
{
    require_parameter(*this, theta);
    Matrix I(3, 3);
    I << 1, x, 0, x, x * x, 0, 0, 0, 2;
    return I / (theta(2) * theta(2));
}

Matrix LinearRegressionFamily::fisher_information(const ParamVector& theta) const
{
    if (design_.empty())
        throw DomainError("regression: fisher information needs the covariate design");
    Matrix I = Matrix::Zero(3, 3);
    for (double x : design_)
        I += fisher_information(theta, x);
    return I / static_cast<double>(design_.size());
}

ParamVector LinearRegressionFamily::weighted_closed_form(const std::vector<RegressionPoint>& sample, const Eigen::VectorXd& w) const
{
    const double total = weight_total(w, sample.size(), name());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        mx += w(i) * sample[i].x;
        my += w(i) * sample[i].y;
    }
    mx /= total;
    my /= total;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        sxx += w(i) * (sample[i].x - mx) * (sample[i].x - mx);
        sxy += w(i) * (sample[i].x - mx) * (sample[i].y - my);
    }
    if (!(sxx > 1e-12 * total * (1 + mx * mx)))
        throw DegenerateError("regression: weighted design matrix is singular");
    const double b1 = sxy / sxx, b0 = my - b1 * mx;
    double sse = 0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        const double e = sample[i].y - b0 - b1 * sample[i].x;
        sse += w(i) * e * e;
    }
    const double s = std::sqrt(sse / total);
    if (!(s > 0))
        throw DegenerateError("regression: weighted residual scale is zero");
    ParamVector theta(3);
    theta << b0, b1, s;
    return theta;
}

ParamVector LinearRegressionFamily::mle(const std::vector<RegressionPoint>& sample) const
{
    return weighted_closed_form(sample, ones(sample.size()));
}

} // namespace wle
