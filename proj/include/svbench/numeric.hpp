#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>
#include <boost/multiprecision/mpfr.hpp>

namespace svbench {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;
// Variable-precision real; the working precision is set per computation with
// PrecisionScope.
using Real = boost::multiprecision::mpfr_float;

inline constexpr unsigned kDefaultDigits = 50;

// Sets the default decimal precision of Real for the lifetime of the scope.
class PrecisionScope {
 public:
  explicit PrecisionScope(unsigned digits)
      : saved_(Real::default_precision()) {
    Real::default_precision(digits);
  }
  ~PrecisionScope() { Real::default_precision(saved_); }
  PrecisionScope(const PrecisionScope&) = delete;
  PrecisionScope& operator=(const PrecisionScope&) = delete;

 private:
  unsigned saved_;
};

inline std::string to_string(const Rational& q) {
  auto num = boost::multiprecision::numerator(q);
  auto den = boost::multiprecision::denominator(q);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

inline Rational parse_rational(const std::string& s) {
  auto slash = s.find('/');
  if (slash == std::string::npos) return Rational(BigInt(s));
  return Rational(BigInt(s.substr(0, slash)), BigInt(s.substr(slash + 1)));
}

inline std::string to_string(const Real& x, unsigned digits = kDefaultDigits) {
  return x.str(static_cast<std::streamsize>(digits));
}

inline Real to_real(const Rational& q) {
  return Real(boost::multiprecision::numerator(q)) /
         Real(boost::multiprecision::denominator(q));
}

inline BigInt ceil_to_int(const Real& x) {
  return static_cast<Real>(ceil(x)).convert_to<BigInt>();
}

// int64 arithmetic that throws std::overflow_error instead of wrapping.
// Used as the fast path of exact elimination, with BigInt as the fallback.
class CheckedInt64 {
 public:
  constexpr CheckedInt64(std::int64_t v = 0) : v_(v) {}  // NOLINT(implicit)
  constexpr std::int64_t value() const { return v_; }

  friend CheckedInt64 operator+(CheckedInt64 a, CheckedInt64 b) {
    std::int64_t r;
    if (__builtin_add_overflow(a.v_, b.v_, &r)) overflow();
    return r;
  }
  friend CheckedInt64 operator-(CheckedInt64 a, CheckedInt64 b) {
    std::int64_t r;
    if (__builtin_sub_overflow(a.v_, b.v_, &r)) overflow();
    return r;
  }
  friend CheckedInt64 operator*(CheckedInt64 a, CheckedInt64 b) {
    std::int64_t r;
    if (__builtin_mul_overflow(a.v_, b.v_, &r)) overflow();
    return r;
  }
  friend CheckedInt64 operator/(CheckedInt64 a, CheckedInt64 b) {
    if (a.v_ == std::numeric_limits<std::int64_t>::min() && b.v_ == -1)
      overflow();
    return a.v_ / b.v_;
  }
  friend CheckedInt64 operator%(CheckedInt64 a, CheckedInt64 b) {
    if (b.v_ == -1) return 0;
    return a.v_ % b.v_;
  }
  CheckedInt64 operator-() const {
    if (v_ == std::numeric_limits<std::int64_t>::min()) overflow();
    return -v_;
  }
  CheckedInt64& operator+=(CheckedInt64 b) { return *this = *this + b; }
  CheckedInt64& operator-=(CheckedInt64 b) { return *this = *this - b; }
  friend auto operator<=>(CheckedInt64, CheckedInt64) = default;
  friend bool operator==(CheckedInt64, CheckedInt64) = default;

 private:
  [[noreturn]] static void overflow() {
    throw std::overflow_error("int64 overflow in exact arithmetic");
  }
  std::int64_t v_;
};

inline CheckedInt64 abs(CheckedInt64 a) { return a < 0 ? -a : a; }
inline BigInt to_big(CheckedInt64 a) { return BigInt(a.value()); }
inline BigInt to_big(const BigInt& a) { return a; }

}  // namespace svbench
