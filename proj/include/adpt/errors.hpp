#pragma once

#include <stdexcept>
#include <string>

namespace adpt {

// Vector or matrix sizes that do not agree with the plant or basis.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Input gain, Jacobian or normal matrix too ill-conditioned to invert.
class SingularityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Pose outside the reachable workspace of a mechanism.
class WorkspaceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class TrainingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace adpt
