#include "muntz/real.hpp"

#include <algorithm>
#include <cstdlib>
#include <stdexcept>

namespace muntz {

namespace {

thread_local unsigned thread_default_bits = 64;

// MPFR's own exponent range is per-thread; widen it once per thread so that
// quantities like 0.2^10000 stay representable.
struct ExponentRangeInit {
  ExponentRangeInit() {
    mpfr_set_emin(mpfr_get_emin_min());
    mpfr_set_emax(mpfr_get_emax_max());
  }
};

void ensure_exponent_range() {
  thread_local ExponentRangeInit init;
  (void)init;
}

unsigned wider(const Real& a, const Real& b) { return std::max(a.bits(), b.bits()); }

}  // namespace

void Real::init(unsigned bits) {
  ensure_exponent_range();
  mpfr_init2(value_, static_cast<mpfr_prec_t>(std::max(bits, 2u)));
}

void Real::widen_to(unsigned bits) {
  if (bits > this->bits()) mpfr_prec_round(value_, static_cast<mpfr_prec_t>(bits), MPFR_RNDN);
}

Real::Real() {
  init(thread_default_bits);
  mpfr_set_zero(value_, 1);
}

Real::Real(double value) {
  init(thread_default_bits);
  mpfr_set_d(value_, value, MPFR_RNDN);
}

Real::Real(int value) : Real(static_cast<long>(value)) {}

Real::Real(long value) {
  init(thread_default_bits);
  mpfr_set_si(value_, value, MPFR_RNDN);
}

Real::Real(unsigned long value) {
  init(thread_default_bits);
  mpfr_set_ui(value_, value, MPFR_RNDN);
}

Real::Real(double value, unsigned bits) {
  init(bits);
  mpfr_set_d(value_, value, MPFR_RNDN);
}

Real::Real(const Real& other) {
  init(other.bits());
  mpfr_set(value_, other.value_, MPFR_RNDN);
}

Real::Real(Real&& other) noexcept {
  value_[0] = other.value_[0];
  other.value_[0]._mpfr_d = nullptr;
}

Real& Real::operator=(const Real& other) {
  if (this == &other) return *this;
  if (value_[0]._mpfr_d == nullptr) {
    init(other.bits());
  } else if (bits() != other.bits()) {
    mpfr_set_prec(value_, other.value_[0]._mpfr_prec);
  }
  mpfr_set(value_, other.value_, MPFR_RNDN);
  return *this;
}

Real& Real::operator=(Real&& other) noexcept {
  if (this == &other) return *this;
  if (value_[0]._mpfr_d != nullptr) mpfr_clear(value_);
  value_[0] = other.value_[0];
  other.value_[0]._mpfr_d = nullptr;
  return *this;
}

Real::~Real() {
  if (value_[0]._mpfr_d != nullptr) mpfr_clear(value_);
}

Real Real::from_string(const std::string& text, unsigned bits) {
  Real r(0.0, bits);
  if (mpfr_set_str(r.value_, text.c_str(), 10, MPFR_RNDN) != 0) {
    throw std::invalid_argument("not a number: " + text);
  }
  return r;
}

unsigned Real::default_bits() { return thread_default_bits; }

unsigned Real::bits() const { return static_cast<unsigned>(mpfr_get_prec(value_)); }

void Real::set_bits(unsigned bits) {
  mpfr_prec_round(value_, static_cast<mpfr_prec_t>(std::max(bits, 2u)), MPFR_RNDN);
}

double Real::to_double() const { return mpfr_get_d(value_, MPFR_RNDN); }

std::string Real::to_string(int significant_digits) const {
  char* raw = nullptr;
  mpfr_asprintf(&raw, "%.*Rg", significant_digits, value_);
  std::string out(raw);
  mpfr_free_str(raw);
  return out;
}

bool Real::is_zero() const { return mpfr_zero_p(value_) != 0; }
bool Real::is_finite() const { return mpfr_number_p(value_) != 0; }
int Real::sign() const { return mpfr_sgn(value_); }

long Real::exponent2() const {
  if (!mpfr_regular_p(value_)) return mpfr_zero_p(value_) ? -(1L << 60) : (1L << 60);
  return static_cast<long>(mpfr_get_exp(value_));
}

Real& Real::operator+=(const Real& rhs) {
  widen_to(rhs.bits());
  mpfr_add(value_, value_, rhs.value_, MPFR_RNDN);
  return *this;
}

Real& Real::operator-=(const Real& rhs) {
  widen_to(rhs.bits());
  mpfr_sub(value_, value_, rhs.value_, MPFR_RNDN);
  return *this;
}

Real& Real::operator*=(const Real& rhs) {
  widen_to(rhs.bits());
  mpfr_mul(value_, value_, rhs.value_, MPFR_RNDN);
  return *this;
}

Real& Real::operator/=(const Real& rhs) {
  widen_to(rhs.bits());
  mpfr_div(value_, value_, rhs.value_, MPFR_RNDN);
  return *this;
}

Real& Real::add_product(const Real& a, const Real& b) {
  widen_to(wider(a, b));
  mpfr_fma(value_, a.value_, b.value_, value_, MPFR_RNDN);
  return *this;
}

Real& Real::sub_product(const Real& a, const Real& b) {
  widen_to(wider(a, b));
  // fms computes a*b - this; negate to get this - a*b.
  mpfr_fms(value_, a.value_, b.value_, value_, MPFR_RNDN);
  mpfr_neg(value_, value_, MPFR_RNDN);
  return *this;
}

Real Real::operator-() const {
  Real r(Uninitialized{});
  r.init(bits());
  mpfr_neg(r.value_, value_, MPFR_RNDN);
  return r;
}

Real operator+(const Real& a, const Real& b) {
  Real r(Real::Uninitialized{});
  r.init(wider(a, b));
  mpfr_add(r.value_, a.value_, b.value_, MPFR_RNDN);
  return r;
}

Real operator-(const Real& a, const Real& b) {
  Real r(Real::Uninitialized{});
  r.init(wider(a, b));
  mpfr_sub(r.value_, a.value_, b.value_, MPFR_RNDN);
  return r;
}

Real operator*(const Real& a, const Real& b) {
  Real r(Real::Uninitialized{});
  r.init(wider(a, b));
  mpfr_mul(r.value_, a.value_, b.value_, MPFR_RNDN);
  return r;
}

Real operator/(const Real& a, const Real& b) {
  Real r(Real::Uninitialized{});
  r.init(wider(a, b));
  mpfr_div(r.value_, a.value_, b.value_, MPFR_RNDN);
  return r;
}

bool operator==(const Real& a, const Real& b) { return mpfr_equal_p(a.value_, b.value_) != 0; }

std::partial_ordering operator<=>(const Real& a, const Real& b) {
  if (mpfr_unordered_p(a.value_, b.value_)) return std::partial_ordering::unordered;
  const int c = mpfr_cmp(a.value_, b.value_);
  if (c < 0) return std::partial_ordering::less;
  if (c > 0) return std::partial_ordering::greater;
  return std::partial_ordering::equivalent;
}

Real abs(const Real& x) {
  Real r(0.0, x.bits());
  mpfr_abs(r.get(), x.get(), MPFR_RNDN);
  return r;
}

Real sqrt(const Real& x) {
  Real r(0.0, x.bits());
  mpfr_sqrt(r.get(), x.get(), MPFR_RNDN);
  return r;
}

Real cos(const Real& x) {
  Real r(0.0, x.bits());
  mpfr_cos(r.get(), x.get(), MPFR_RNDN);
  return r;
}

Real exp(const Real& x) {
  Real r(0.0, x.bits());
  mpfr_exp(r.get(), x.get(), MPFR_RNDN);
  return r;
}

Real log(const Real& x) {
  Real r(0.0, x.bits());
  mpfr_log(r.get(), x.get(), MPFR_RNDN);
  return r;
}

Real pow(const Real& base, const Real& exponent) {
  Real r(0.0, std::max(base.bits(), exponent.bits()));
  mpfr_pow(r.get(), base.get(), exponent.get(), MPFR_RNDN);
  return r;
}

Real pow(const Real& base, long exponent) {
  Real r(0.0, base.bits());
  mpfr_pow_si(r.get(), base.get(), exponent, MPFR_RNDN);
  return r;
}

Real max(const Real& a, const Real& b) { return a < b ? b : a; }
Real min(const Real& a, const Real& b) { return b < a ? b : a; }

Real pi(unsigned bits) {
  Real r(0.0, bits);
  mpfr_const_pi(r.get(), MPFR_RNDN);
  return r;
}

PrecisionScope::PrecisionScope(unsigned bits) : saved_(thread_default_bits) {
  thread_default_bits = std::max(bits, 2u);
}

PrecisionScope::~PrecisionScope() { thread_default_bits = saved_; }

}  // namespace muntz
