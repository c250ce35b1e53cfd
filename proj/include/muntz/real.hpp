#pragma once

#include <mpfr.h>

#include <compare>
#include <string>

namespace muntz {

/// Multiprecision real backed by MPFR.
///
/// Every value carries its own significand width. Values created without an
/// explicit width use the calling thread's default (see PrecisionScope), and
/// the result of a binary operation takes the wider width of its operands.
/// There is no shared mutable state between threads.
class Real {
 public:
  Real();
  Real(double value);  // NOLINT(google-explicit-constructor): literals mix freely
  Real(int value);     // NOLINT(google-explicit-constructor)
  Real(long value);    // NOLINT(google-explicit-constructor)
  Real(unsigned long value);  // NOLINT(google-explicit-constructor)
  Real(double value, unsigned bits);

  Real(const Real& other);
  Real(Real&& other) noexcept;
  Real& operator=(const Real& other);
  Real& operator=(Real&& other) noexcept;
  ~Real();

  static Real from_string(const std::string& text, unsigned bits);

  /// Thread-local default width used by value-less construction.
  static unsigned default_bits();

  unsigned bits() const;
  /// Rounds the value to a new width in place.
  void set_bits(unsigned bits);

  double to_double() const;
  std::string to_string(int significant_digits = 20) const;

  bool is_zero() const;
  bool is_finite() const;
  int sign() const;
  /// floor(log2|x|) + 1 for nonzero finite x; a large negative number for 0.
  long exponent2() const;

  Real& operator+=(const Real& rhs);
  Real& operator-=(const Real& rhs);
  Real& operator*=(const Real& rhs);
  Real& operator/=(const Real& rhs);
  /// this += a * b with a single rounding.
  Real& add_product(const Real& a, const Real& b);
  /// this -= a * b with a single rounding.
  Real& sub_product(const Real& a, const Real& b);

  Real operator-() const;

  friend Real operator+(const Real& a, const Real& b);
  friend Real operator-(const Real& a, const Real& b);
  friend Real operator*(const Real& a, const Real& b);
  friend Real operator/(const Real& a, const Real& b);

  friend bool operator==(const Real& a, const Real& b);
  friend std::partial_ordering operator<=>(const Real& a, const Real& b);

  mpfr_srcptr get() const { return value_; }
  mpfr_ptr get() { return value_; }

 private:
  struct Uninitialized {};
  explicit Real(Uninitialized) {}
  void init(unsigned bits);
  void widen_to(unsigned bits);

  mpfr_t value_;
};

Real abs(const Real& x);
Real sqrt(const Real& x);
Real cos(const Real& x);
Real exp(const Real& x);
Real log(const Real& x);
Real pow(const Real& base, const Real& exponent);
Real pow(const Real& base, long exponent);
Real max(const Real& a, const Real& b);
Real min(const Real& a, const Real& b);
Real pi(unsigned bits);

/// Sets the calling thread's default Real width for the lifetime of the scope.
class PrecisionScope {
 public:
  explicit PrecisionScope(unsigned bits);
  ~PrecisionScope();
  PrecisionScope(const PrecisionScope&) = delete;
  PrecisionScope& operator=(const PrecisionScope&) = delete;

 private:
  unsigned saved_;
};

}  // namespace muntz
