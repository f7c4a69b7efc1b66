#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace wle {

using ParamVector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Vector2 = Eigen::Vector2d;

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// observation outside the support, or parameter outside the parameter space
class DomainError : public Error {
public:
    using Error::Error;
};

class NumericError : public Error {
public:
    using Error::Error;
};

// all weight vanished, or a weighted variance collapsed to zero
class DegenerateError : public Error {
public:
    using Error::Error;
};

class InvalidSpec : public Error {
public:
    using Error::Error;
};

class NotFound : public Error {
public:
    using Error::Error;
};

class ChecksumError : public Error {
public:
    using Error::Error;
};

enum class FamilyKind { univariate, bivariate, regression };

enum class Support { lattice, half_line, real_line, plane };

struct CdfPair {
    double cdf;
    double survival;
};

inline double sup_norm(const ParamVector& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

} // namespace wle
