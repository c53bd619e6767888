#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace alphabp {

// A distribution over a finite Domain. Entries are nonnegative; divergence
// routines additionally require strict positivity. Not necessarily normalized.
using DiscreteDistribution = std::vector<double>;

struct StructuralError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

struct ParameterError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct CapacityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Raised when a message vector collapses numerically (an entry below the
// post-normalization floor).
struct DegenerateMessageError : NumericalError {
  using NumericalError::NumericalError;
};

struct SamplingError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {

inline double log_sum_exp(const std::vector<double>& xs) {
  double m = -std::numeric_limits<double>::infinity();
  for (double x : xs) m = std::max(m, x);
  if (!std::isfinite(m)) return m;
  double s = 0.0;
  for (double x : xs) s += std::exp(x - m);
  return m + std::log(s);
}

// Streaming log-sum-exp accumulator, used by the enumeration oracles so that
// 2^24-term sums never materialize a buffer.
class OnlineLse {
 public:
  void add(double x) {
    if (x <= max_) {
      sum_ += std::exp(x - max_);
    } else {
      sum_ = sum_ * std::exp(max_ - x) + 1.0;
      max_ = x;
    }
  }
  double value() const {
    if (sum_ == 0.0) return -std::numeric_limits<double>::infinity();
    return max_ + std::log(sum_);
  }

 private:
  double max_ = -std::numeric_limits<double>::infinity();
  double sum_ = 0.0;
};

inline void normalize_in_place(std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  for (double& x : v) x /= s;
}

}  // namespace detail

}  // namespace alphabp
