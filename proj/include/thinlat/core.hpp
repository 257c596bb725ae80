#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace thinlat {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using IVec = Eigen::Matrix<std::int64_t, Eigen::Dynamic, 1>;

// Error carrying a stable name (e.g. "UnboundedBody") that the CLI reports.
class Error : public std::runtime_error {
 public:
  Error(std::string name, const std::string& what)
      : std::runtime_error(name + ": " + what), name_(std::move(name)) {}
  const std::string& name() const { return name_; }

 private:
  std::string name_;
};

// Validation problems in user input; the CLI maps these to exit code 2.
class ValidationError : public std::runtime_error {
 public:
  ValidationError(std::string field, const std::string& what)
      : std::runtime_error(field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

// Volume of the Euclidean unit ball in dimension n.
double unit_ball_volume(int n);

}  // namespace thinlat
