#pragma once

#include <stdexcept>
#include <string>

namespace eigenshell {

/// Raised when a ratio is requested over a shell that selects no states.
class EmptyShellError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NotSelfAdjointError : public std::invalid_argument {
 public:
  NotSelfAdjointError(const std::string& what, double max_asymmetry)
      : std::invalid_argument(what), max_asymmetry_(max_asymmetry) {}
  double max_asymmetry() const noexcept { return max_asymmetry_; }

 private:
  double max_asymmetry_;
};

class NotUnitaryError : public std::invalid_argument {
 public:
  NotUnitaryError(const std::string& what, double defect)
      : std::invalid_argument(what), defect_(defect) {}
  double defect() const noexcept { return defect_; }

 private:
  double defect_;
};

/// LAPACK reported a failure (info != 0).
class NonConvergenceError : public std::runtime_error {
 public:
  NonConvergenceError(const std::string& routine, int info)
      : std::runtime_error(routine + " failed (info=" + std::to_string(info) + ")"), info_(info) {}
  int info() const noexcept { return info_; }

 private:
  int info_;
};

}  // namespace eigenshell
