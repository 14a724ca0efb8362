#pragma once

#include <algorithm>
#include <cmath>
#include <limits>

namespace ricb {

// A nonnegative quantity carried by its natural logarithm. Values smaller
// than the smallest subnormal double stay exact in log form; value()
// underflows to zero.
class LogValue {
 public:
  constexpr LogValue() = default;

  static LogValue from_log(double log_value) { return LogValue(log_value); }
  static LogValue from_value(double value) {
    return LogValue(value > 0.0 ? std::log(value)
                                : -std::numeric_limits<double>::infinity());
  }
  static LogValue zero() {
    return LogValue(-std::numeric_limits<double>::infinity());
  }

  double log() const { return log_; }
  double log10() const { return log_ / std::log(10.0); }
  double value() const { return std::exp(log_); }
  bool is_zero() const { return std::isinf(log_) && log_ < 0.0; }

  friend LogValue operator*(LogValue a, LogValue b) {
    return LogValue(a.log_ + b.log_);
  }
  // log(exp(a) + exp(b)) without overflow or underflow.
  friend LogValue operator+(LogValue a, LogValue b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    const double hi = std::max(a.log_, b.log_);
    const double lo = std::min(a.log_, b.log_);
    return LogValue(hi + std::log1p(std::exp(lo - hi)));
  }
  friend bool operator<(LogValue a, LogValue b) { return a.log_ < b.log_; }

 private:
  explicit LogValue(double log_value) : log_(log_value) {}
  double log_ = -std::numeric_limits<double>::infinity();
};

}  // namespace ricb
