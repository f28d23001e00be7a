#pragma once

#include <cmath>
#include <limits>
#include <string>

#include "cwvote/errors.hpp"

namespace cwvote {

// A coupling on the compactified line [-inf, inf]. Finite values must be
// finite doubles; the infinities are first-class states, not overflow
// artifacts. Total order: -inf < any finite < +inf.
class ExtendedCoupling {
 public:
  ExtendedCoupling() : value_(0.0) {}

  static ExtendedCoupling finite(double value) {
    if (!std::isfinite(value)) {
      throw Error(ErrorKind::Precondition,
                  "finite coupling required, got " + std::to_string(value));
    }
    return ExtendedCoupling(value);
  }
  static ExtendedCoupling neg_infinity() {
    return ExtendedCoupling(-std::numeric_limits<double>::infinity());
  }
  static ExtendedCoupling pos_infinity() {
    return ExtendedCoupling(std::numeric_limits<double>::infinity());
  }

  bool is_finite() const { return std::isfinite(value_); }
  bool is_neg_infinity() const { return std::isinf(value_) && value_ < 0; }
  bool is_pos_infinity() const { return std::isinf(value_) && value_ > 0; }

  // The finite value; throws if the coupling is infinite.
  double value() const {
    if (!is_finite()) {
      throw Error(ErrorKind::Precondition, "coupling is not finite");
    }
    return value_;
  }

  // Value as a raw double, with the infinities mapped to IEEE +-inf.
  double as_double() const { return value_; }

  friend bool operator==(ExtendedCoupling a, ExtendedCoupling b) {
    return a.value_ == b.value_;
  }
  friend bool operator<(ExtendedCoupling a, ExtendedCoupling b) {
    return a.value_ < b.value_;
  }
  friend bool operator<=(ExtendedCoupling a, ExtendedCoupling b) {
    return a.value_ <= b.value_;
  }

  std::string str() const {
    if (is_neg_infinity()) return "-inf";
    if (is_pos_infinity()) return "inf";
    return std::to_string(value_);
  }

 private:
  explicit ExtendedCoupling(double v) : value_(v) {}
  double value_;
};

}  // namespace cwvote
