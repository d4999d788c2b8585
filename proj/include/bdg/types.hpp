#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace bdg
{

using Real = double;
using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

/// Physically inadmissible state encountered (negative density, height, ...).
struct InvariantViolation : std::runtime_error
{
   explicit InvariantViolation(const std::string &what)
      : std::runtime_error(what) { }
};

struct ConfigError : std::runtime_error
{
   explicit ConfigError(const std::string &what)
      : std::runtime_error(what) { }
};

} // namespace bdg
