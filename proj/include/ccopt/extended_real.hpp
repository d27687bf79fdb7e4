#pragma once

#include <cmath>
#include <compare>
#include <limits>
#include <ostream>

#include "ccopt/error.hpp"

namespace ccopt {

/// A real number or +infinity. -infinity and NaN are not representable.
///
/// Infinity is carried as an explicit flag so that domain tests never depend
/// on IEEE infinities propagating through arithmetic (inf - inf = NaN).
class ExtendedReal {
 public:
  constexpr ExtendedReal() = default;

  /// Throws ErrorCode::NotANumber on NaN. A +inf double maps to infinity();
  /// -inf is rejected.
  ExtendedReal(double v) {  // NOLINT(google-explicit-constructor)
    if (std::isnan(v)) throw Error(ErrorCode::NotANumber, "ExtendedReal from NaN");
    if (std::isinf(v)) {
      if (v < 0) throw Error(ErrorCode::InvalidArgument, "ExtendedReal cannot hold -inf");
      infinite_ = true;
      return;
    }
    value_ = v;
  }

  static constexpr ExtendedReal infinity() {
    ExtendedReal r;
    r.infinite_ = true;
    return r;
  }

  constexpr bool is_finite() const noexcept { return !infinite_; }
  constexpr bool is_infinite() const noexcept { return infinite_; }

  /// Finite value; throws if infinite.
  double value() const {
    if (infinite_) throw Error(ErrorCode::OutsideDomain, "value() of +inf");
    return value_;
  }

  /// Finite value, or +inf as a double.
  double to_double() const noexcept {
    return infinite_ ? std::numeric_limits<double>::infinity() : value_;
  }

  friend ExtendedReal operator+(ExtendedReal a, ExtendedReal b) {
    if (a.infinite_ || b.infinite_) return infinity();
    return ExtendedReal(a.value_ + b.value_);
  }

  friend ExtendedReal operator-(ExtendedReal a, double b) { return a + ExtendedReal(-b); }

  /// Scaling by a nonnegative factor; 0 * inf is taken as +inf.
  friend ExtendedReal operator*(double s, ExtendedReal a) {
    if (std::isnan(s) || s < 0) throw Error(ErrorCode::InvalidArgument, "scale must be >= 0");
    if (a.infinite_) return infinity();
    return ExtendedReal(s * a.value_);
  }

  friend ExtendedReal operator/(ExtendedReal a, double s) {
    if (!(s > 0)) throw Error(ErrorCode::InvalidArgument, "divisor must be > 0");
    if (a.infinite_) return infinity();
    return ExtendedReal(a.value_ / s);
  }

  friend constexpr bool operator==(ExtendedReal a, ExtendedReal b) noexcept {
    if (a.infinite_ || b.infinite_) return a.infinite_ == b.infinite_;
    return a.value_ == b.value_;
  }

  friend constexpr std::strong_ordering operator<=>(ExtendedReal a, ExtendedReal b) noexcept {
    if (a.infinite_ && b.infinite_) return std::strong_ordering::equal;
    if (a.infinite_) return std::strong_ordering::greater;
    if (b.infinite_) return std::strong_ordering::less;
    if (a.value_ < b.value_) return std::strong_ordering::less;
    if (a.value_ > b.value_) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

  friend std::ostream& operator<<(std::ostream& os, ExtendedReal a) {
    if (a.infinite_) return os << "+inf";
    return os << a.value_;
  }

 private:
  double value_ = 0.0;
  bool infinite_ = false;
};

}  // namespace ccopt
