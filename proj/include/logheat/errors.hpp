#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace logheat {

// Invalid argument / precondition violation (bad index, bad parameter range).
class ParameterError : public std::invalid_argument {
 public:
  explicit ParameterError(const std::string& msg) : std::invalid_argument(msg) {}
};

// Run-time numeric failure (NaN/Inf encountered where finite values are required).
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

// Mismatched time grids passed to the path metric.
class AlignmentError : public std::invalid_argument {
 public:
  explicit AlignmentError(const std::string& msg) : std::invalid_argument(msg) {}
};

// Bad mark-space / control / run configuration.
class ConfigurationError : public std::invalid_argument {
 public:
  explicit ConfigurationError(const std::string& msg) : std::invalid_argument(msg) {}
};

// Trajectory left the admissible region. Carries the failure time and the
// tail of the L2-norm history for diagnostics.
class BlowUpError : public NumericError {
 public:
  BlowUpError(double time, std::vector<double> norm_history, const std::string& msg)
      : NumericError(msg), time_(time), norm_history_(std::move(norm_history)) {}

  double time() const { return time_; }
  const std::vector<double>& norm_history() const { return norm_history_; }

 private:
  double time_;
  std::vector<double> norm_history_;
};

}  // namespace logheat
