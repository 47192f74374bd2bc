#pragma once

#include <Eigen/Core>

#include <stdexcept>
#include <string>

namespace stormbox {

using Vector = Eigen::VectorXd;
using Flags = Eigen::Array<bool, Eigen::Dynamic, 1>;
using Index = Eigen::Index;

/// Standard gravity, m/s^2.
inline constexpr double kGravity = 9.80665;

/// Raised when an element id does not resolve.
class ReferenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Scenario configuration does not match the expected schema.
/// `path()` is the offending field, e.g. `states[1].quantity`.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string path, const std::string& message)
      : std::runtime_error(path.empty() ? message : path + ": " + message),
        path_(std::move(path)) {}

  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

/// Misuse of the control loop (wrong action count, stepping a finished run).
class StepError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Hydraulic state became non-finite.
class DivergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace stormbox
