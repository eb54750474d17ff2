#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace netarm {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat2 = Eigen::Matrix2d;
using Mat3 = Eigen::Matrix3d;
using Mat23 = Eigen::Matrix<double, 2, 3>;

/// Base class for failures raised while running a scenario.
class SimulationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The estimated Jacobian determinant fell below the configured floor.
class SingularEstimatedJacobian : public SimulationError {
 public:
  explicit SingularEstimatedJacobian(double det)
      : SimulationError("estimated Jacobian near singular, |det| = " +
                        std::to_string(std::abs(det))),
        det_(det) {}
  SingularEstimatedJacobian(double det, const std::string& message)
      : SimulationError(message), det_(det) {}
  double det() const { return det_; }

 private:
  double det_;
};

/// A delay channel received samples with non-increasing timestamps.
class NonMonotoneTime : public SimulationError {
 public:
  using SimulationError::SimulationError;
};

/// A state entry left the sane range (non-finite or |value| > 1e6).
class NumericalBlowup : public SimulationError {
 public:
  using SimulationError::SimulationError;
};

/// Scenario configuration could not be parsed or violates an invariant.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace netarm
