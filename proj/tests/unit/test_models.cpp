#include "wle/models.hpp"
#include "wle/rng.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace wle;

namespace {

template <class F>
ParamVector num_grad(F f, const ParamVector& t, double h = 1e-5)
{
    ParamVector g(t.size());
    for (Eigen::Index j = 0; j < t.size(); ++j) {
        ParamVector a = t, b = t;
        a(j) += h;
        b(j) -= h;
        g(j) = (f(a) - f(b)) / (2 * h);
    }
    return g;
}

ParamVector v(std::initializer_list<double> x)
{
    ParamVector p(static_cast<Eigen::Index>(x.size()));
    Eigen::Index i = 0;
    for (double e : x)
        p(i++) = e;
    return p;
}

template <class Family, class Obs>
void check_derivatives(const Family& fam, const ParamVector& th, const Obs& x)
{
    const ParamVector g = num_grad([&](const ParamVector& t) { return fam.log_density(t, x); }, th);
    EXPECT_LT((fam.score(th, x) - g).cwiseAbs().maxCoeff(), 1e-6);
    Matrix J(th.size(), th.size());
    for (Eigen::Index j = 0; j < th.size(); ++j) {
        ParamVector a = th, b = th;
        a(j) += 1e-5;
        b(j) -= 1e-5;
        J.col(j) = (fam.score(a, x) - fam.score(b, x)) / 2e-5;
    }
    EXPECT_LT((fam.score_jacobian(th, x) - J).cwiseAbs().maxCoeff(), 1e-5);
}

template <class Family, class Obs>
void check_cdf_gradients(const Family& fam, const ParamVector& th, const Obs& x)
{
    const ParamVector gF = num_grad([&](const ParamVector& t) { return fam.cdf_and_survival(t, x).cdf; }, th);
    const ParamVector gS = num_grad([&](const ParamVector& t) { return fam.cdf_and_survival(t, x).survival; }, th);
    EXPECT_LT((fam.cdf_gradient(th, x) - gF).cwiseAbs().maxCoeff(), 1e-7);
    EXPECT_LT((fam.survival_gradient(th, x) - gS).cwiseAbs().maxCoeff(), 1e-7);
}

} // namespace

TEST(Models, ScoresAreLogDensityGradients)
{
    for (double x : {-2.0, 0.3, 4.0})
        check_derivatives(NormalFamily{}, v({0.5, 2.0}), x);
    for (double x : {0.0, 2.0, 9.0})
        check_derivatives(PoissonFamily{}, v({3.0}), x);
    for (double x : {0.1, 1.5})
        check_derivatives(ExponentialFamily{}, v({0.7}), x);
    check_derivatives(NormalLocationFamily(2.0), v({1.0}), 2.5);
    check_derivatives(BivariateNormalFamily{}, v({1, -1, 2, 0.5, 0.4}), Vector2(0.3, -0.2));
    check_derivatives(LinearRegressionFamily{}, v({1, 2, 0.8}), RegressionPoint{0.5, 2.9});
}

TEST(Models, CdfGradients)
{
    check_cdf_gradients(NormalFamily{}, v({0.5, 2.0}), 1.2);
    check_cdf_gradients(ExponentialFamily{}, v({0.7}), 0.9);
    check_cdf_gradients(LinearRegressionFamily{}, v({1, 2, 0.8}), RegressionPoint{0.5, 1.9});
    // Poisson: discrete in x, smooth in theta
    check_cdf_gradients(PoissonFamily{}, v({3.0}), 2.0);
}

TEST(Models, PoissonSurvivalIncludesThePoint)
{
    const PoissonFamily p;
    const auto m = p.cdf_and_survival(v({2.0}), 3.0);
    EXPECT_NEAR(m.cdf + m.survival, 1.0 + std::exp(p.log_density(v({2.0}), 3.0)), 1e-14);
}

TEST(Models, FisherInformationClosedForms)
{
    const Matrix In = NormalFamily{}.fisher_information(v({1.0, 4.0}));
    EXPECT_NEAR(In(0, 0), 0.25, 1e-12);
    EXPECT_NEAR(In(1, 1), 1.0 / 32, 1e-12);
    EXPECT_NEAR(In(0, 1), 0.0, 1e-12);
    EXPECT_NEAR(PoissonFamily{}.fisher_information(v({3.0}))(0, 0), 1.0 / 3, 1e-12);
    EXPECT_NEAR(ExponentialFamily{}.fisher_information(v({0.5}))(0, 0), 4.0, 1e-12);
}

TEST(Models, BivariateFisherInformationMatchesMonteCarlo)
{
    const BivariateNormalFamily fam;
    const ParamVector th = v({1, -1, 2, 0.5, 0.4});
    const Matrix I = fam.fisher_information(th);
    const Eigen::Matrix2d S = BivariateNormalFamily::covariance(th);
    EXPECT_LT((I.topLeftCorner(2, 2) - S.inverse()).cwiseAbs().maxCoeff(), 1e-10);
    EXPECT_LT(I.topRightCorner(2, 3).cwiseAbs().maxCoeff(), 1e-10);
    // E[u u^T] by simulation
    const Eigen::Matrix2d L = S.llt().matrixL();
    RandomStream r(3, 3);
    Matrix acc = Matrix::Zero(5, 5);
    const int n = 2000000;
    for (int i = 0; i < n; ++i) {
        const Vector2 z(r.normal(), r.normal());
        const ParamVector u = fam.score(th, Vector2(Vector2(1, -1) + L * z));
        acc += u * u.transpose();
    }
    acc /= n;
    EXPECT_LT(((acc - I).array() / (I.array().abs() + 0.2)).abs().maxCoeff(), 0.03);
}

TEST(Models, MaximumLikelihoodClosedForms)
{
    const std::vector<double> x{1.0, 2.0, 4.0, 7.0};
    const ParamVector mn = NormalFamily{}.mle(x);
    EXPECT_DOUBLE_EQ(mn(0), 3.5);
    EXPECT_DOUBLE_EQ(mn(1), (6.25 + 2.25 + 0.25 + 12.25) / 4);
    EXPECT_DOUBLE_EQ(PoissonFamily{}.mle(x)(0), 3.5);
    EXPECT_DOUBLE_EQ(ExponentialFamily{}.mle(x)(0), 1 / 3.5);
    EXPECT_THROW(NormalFamily{}.mle({2.0, 2.0}), DegenerateError);
    EXPECT_THROW(PoissonFamily{}.mle({-1.0}), DomainError);
}

TEST(Models, RegressionMatchesLeastSquares)
{
    std::vector<RegressionPoint> pts{{0, 1.1}, {1, 2.9}, {2, 5.2}, {3, 6.8}, {4, 9.3}};
    Eigen::MatrixXd X(5, 2);
    Eigen::VectorXd y(5);
    for (int i = 0; i < 5; ++i) {
        X(i, 0) = 1;
        X(i, 1) = pts[i].x;
        y(i) = pts[i].y;
    }
    const Eigen::VectorXd b = X.colPivHouseholderQr().solve(y);
    const double s = std::sqrt((y - X * b).squaredNorm() / 5);
    const ParamVector m = LinearRegressionFamily{}.mle(pts);
    EXPECT_NEAR(m(0), b(0), 1e-12);
    EXPECT_NEAR(m(1), b(1), 1e-12);
    EXPECT_NEAR(m(2), s, 1e-12);
}

TEST(Models, IntegerWeightsEqualReplicatedSample)
{
    const std::vector<double> x{0.5, 1.5, 3.0};
    Eigen::VectorXd w(3);
    w << 2, 1, 3;
    const std::vector<double> rep{0.5, 0.5, 1.5, 3.0, 3.0, 3.0};
    EXPECT_LT((NormalFamily{}.weighted_closed_form(x, w) - NormalFamily{}.mle(rep)).norm(), 1e-12);
    EXPECT_LT((ExponentialFamily{}.weighted_closed_form(x, w) - ExponentialFamily{}.mle(rep)).norm(), 1e-12);

    const std::vector<Vector2> p{{0, 1}, {1, 0.5}, {2, 3}};
    const std::vector<Vector2> prep{{0, 1}, {0, 1}, {1, 0.5}, {2, 3}, {2, 3}, {2, 3}};
    const BivariateNormalFamily b;
    EXPECT_LT((b.weighted_closed_form(p, w) - b.mle(prep)).norm(), 1e-12);
}

TEST(Models, BivariateDivisor)
{
    const std::vector<Vector2> p{{0, 1}, {1, 0.5}, {2, 3}, {4, 1}};
    const ParamVector a = BivariateNormalFamily(CovarianceDivisor::weight_sum).mle(p);
    const ParamVector c = BivariateNormalFamily(CovarianceDivisor::weight_sum_minus_one).mle(p);
    EXPECT_NEAR(c(2), a(2) * 4 / 3, 1e-12);
    EXPECT_NEAR(c(3), a(3) * 4 / 3, 1e-12);
    EXPECT_NEAR(c(4), a(4), 1e-12);
    EXPECT_NEAR(a(2), (3.0625 + 0.5625 + 0.0625 + 5.0625) / 4, 1e-12);
}

TEST(Models, ParameterSpace)
{
    EXPECT_FALSE(NormalFamily{}.in_parameter_space(v({0, 0})));
    EXPECT_FALSE(BivariateNormalFamily{}.in_parameter_space(v({0, 0, 1, 1, 1})));
    EXPECT_FALSE(PoissonFamily{}.in_support(1.5));
    EXPECT_FALSE(ExponentialFamily{}.in_support(-0.1));
    EXPECT_THROW(require_parameter(NormalFamily{}, v({0, -1})), DomainError);
}
