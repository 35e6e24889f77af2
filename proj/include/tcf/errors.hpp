#pragma once

#include <stdexcept>
#include <string>

namespace tcf {

/// Malformed or inconsistent input data (files, manifests, matrices).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The SVM solver hit its iteration budget before meeting the tolerance.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double final_violation)
      : std::runtime_error(what), final_violation_(final_violation) {}

  [[nodiscard]] double final_violation() const noexcept { return final_violation_; }

 private:
  double final_violation_;
};

}  // namespace tcf
