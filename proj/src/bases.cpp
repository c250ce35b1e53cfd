#include "muntz/bases.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "muntz/errors.hpp"
#include "muntz/schur.hpp"
#include "parallel.hpp"

namespace muntz {

namespace {

std::size_t index_of(const std::vector<double>& exponents, double r) {
  const auto it = std::lower_bound(exponents.begin(), exponents.end(), r);
  if (it == exponents.end() || *it != r) {
    throw ValidationError("exponent " + std::to_string(r) + " is not in the target space");
  }
  return static_cast<std::size_t>(it - exponents.begin());
}

}  // namespace

MuntzElement::MuntzElement(std::vector<double> exponents, std::vector<Point> coefficients)
    : exponents_(std::move(exponents)), coefficients_(std::move(coefficients)) {
  if (exponents_.empty()) throw ValidationError("Muntz element needs at least one exponent");
  if (coefficients_.size() != exponents_.size()) {
    throw ValidationError("Muntz element has " + std::to_string(coefficients_.size()) +
                          " coefficients for " + std::to_string(exponents_.size()) + " exponents");
  }
  const std::size_t s = coefficients_.front().size();
  if (s == 0) throw ValidationError("coefficients must have at least one coordinate");
  for (const auto& c : coefficients_) {
    if (c.size() != s) throw ValidationError("coefficients differ in dimension");
  }
  for (std::size_t i = 0; i < exponents_.size(); ++i) {
    if (!(exponents_[i] >= 0.0) || (i > 0 && !(exponents_[i - 1] < exponents_[i]))) {
      throw MonotonicityError(i, "Muntz element exponents must be nonnegative and strictly increasing");
    }
  }
}

MuntzElement MuntzElement::scalar(std::vector<double> exponents, std::vector<double> coefficients) {
  std::vector<Point> pts;
  for (double c : coefficients) pts.push_back({c});
  return MuntzElement(std::move(exponents), std::move(pts));
}

Point MuntzElement::value(double t) const {
  Point out(dimension(), 0.0);
  for (std::size_t k = 0; k < exponents_.size(); ++k) {
    const double w = eval_ft(t, exponents_[k]);
    for (std::size_t c = 0; c < out.size(); ++c) out[c] += w * coefficients_[k][c];
  }
  return out;
}

Point MuntzElement::derivative(double t) const {
  Point out(dimension(), 0.0);
  for (std::size_t k = 0; k < exponents_.size(); ++k) {
    const double r = exponents_[k];
    if (r == 0.0) continue;
    const double w = r * (r == 1.0 ? 1.0 : std::pow(t, r - 1.0));
    for (std::size_t c = 0; c < out.size(); ++c) out[c] += w * coefficients_[k][c];
  }
  return out;
}

std::vector<Real> MuntzElement::value(const Real& t) const {
  std::vector<Real> out(dimension(), Real(0.0, t.bits()));
  for (std::size_t k = 0; k < exponents_.size(); ++k) {
    const Real w = eval_ft(t, exponents_[k]);
    for (std::size_t c = 0; c < out.size(); ++c) out[c].add_product(w, Real(coefficients_[k][c], t.bits()));
  }
  return out;
}

BasisKind BasisKind::chebyshev(Interval interval) {
  interval.validate();
  if (!(interval.a > 0.0)) {
    throw DomainError("Chebyshev-Bernstein bases need a > 0; there is none over [0, b]");
  }
  return {Tag::chebyshev, interval};
}

void ControlPolygon::validate() const {
  if (points.empty()) throw ValidationError("control polygon is empty");
  if (points.size() != exponents.size()) {
    throw ValidationError("control polygon has " + std::to_string(points.size()) + " points for " +
                          std::to_string(exponents.size()) + " exponents");
  }
  for (const auto& p : points) {
    if (p.size() != points.front().size() || p.empty()) {
      throw ValidationError("control points differ in dimension");
    }
  }
  validate_exponents(exponents);
}

GelfondBernsteinBasis::GelfondBernsteinBasis(std::vector<double> exponents)
    : exponents_(std::move(exponents)) {
  validate_exponents(exponents_);
  const std::size_t n = exponents_.size() - 1;
  // Rounding in the samples reaches H_k through r_{k+1}...r_n times the
  // divided-difference weights of r_k..r_n.
  double log_product = 0.0;
  double worst = 0.0;
  for (std::size_t k = n + 1; k-- > 0;) {
    const std::span<const double> tail(exponents_.data() + k, n - k + 1);
    worst = std::max(worst, log_product + log2_divided_difference_weight(tail));
    if (k > 0) log_product += std::log2(exponents_[k]);
  }
  amplification_bits_ = worst;
}

unsigned GelfondBernsteinBasis::working_bits(const PrecisionContext& ctx) const {
  return ctx.significand_bits + static_cast<unsigned>(std::ceil(amplification_bits_)) + 32;
}

std::vector<Real> GelfondBernsteinBasis::values(double t, const PrecisionContext& ctx) const {
  return values(Real(t, working_bits(ctx)), ctx);
}

std::vector<Real> GelfondBernsteinBasis::values(const Real& t_in, const PrecisionContext& ctx) const {
  if (t_in.sign() < 0 || t_in > Real(1.0)) throw DomainError("Gelfond-Bernstein basis lives on [0, 1]");
  const unsigned bits = working_bits(ctx);
  PrecisionScope scope(bits);
  Real t = t_in;
  t.set_bits(bits);
  const std::size_t n = exponents_.size() - 1;
  std::vector<Real> samples;
  samples.reserve(n + 1);
  for (double r : exponents_) samples.push_back(eval_ft(t, r));
  const Real top = samples[n];
  const auto tails = trailing_divided_differences(NodeSet(exponents_), samples);
  std::vector<Real> h(n + 1);
  h[n] = top;
  Real factor(1.0, bits);
  for (std::size_t k = n; k-- > 0;) {
    factor *= Real(exponents_[k + 1], bits);
    h[k] = tails[k] * factor;
    if ((n - k) % 2 == 1) h[k] = -h[k];
  }
  return h;
}

RealMatrix GelfondBernsteinBasis::monomial_coefficients(unsigned bits) const {
  PrecisionScope scope(bits);
  const std::size_t n = exponents_.size() - 1;
  RealMatrix m(n + 1, n + 1, Real(0.0, bits));
  for (std::size_t k = 0; k <= n; ++k) {
    Real lead(1.0, bits);
    for (std::size_t l = k + 1; l <= n; ++l) lead *= Real(exponents_[l], bits);
    if ((n - k) % 2 == 1) lead = -lead;
    for (std::size_t p = k; p <= n; ++p) {
      Real den(1.0, bits);
      for (std::size_t l = k; l <= n; ++l) {
        if (l != p) den *= Real(exponents_[p], bits) - Real(exponents_[l], bits);
      }
      m(k, p) = lead / den;
    }
  }
  return m;
}

Real gelfond_basis_eval(const std::vector<double>& exponents, std::size_t k, double t,
                        const PrecisionContext& ctx) {
  if (k >= exponents.size()) {
    throw ValidationError("basis index " + std::to_string(k) + " out of range for n = " +
                          std::to_string(exponents.size() - 1));
  }
  const GelfondBernsteinBasis basis(exponents);
  Real h = basis.values(t, ctx)[k];
  h.set_bits(ctx.significand_bits);
  return h;
}

unsigned chebyshev_basis_bits(std::size_t n, const PrecisionContext& ctx) {
  return ctx.significand_bits + 64 + 8 * static_cast<unsigned>(n);
}

ChebyshevBernsteinBasis::ChebyshevBernsteinBasis(std::vector<double> exponents, Interval interval,
                                                 unsigned bits)
    : exponents_(std::move(exponents)), interval_(interval), bits_(bits) {
  validate_exponents(exponents_);
  BasisKind::chebyshev(interval_);
  const std::size_t n = exponents_.size() - 1;
  if (n == 0) return;
  PrecisionScope scope(bits_);

  for (double r : exponents_) top_exponents_.push_back(exponents_[n] - r);
  const RealPartition lambda = partition_from_exponents(exponents_);
  const RealPartition lambda0 = bottom_partition(lambda);
  const PrecisionContext wide = PrecisionContext{}.with_bits(bits_);
  const Real k_const = schur_all_ones(lambda, wide) / schur_all_ones(lambda0, wide);

  const Real a(interval_.a, bits_);
  const Real b(interval_.b, bits_);
  const Real generic = sqrt(a * b);
  const Real width_pow = pow(b - a, static_cast<long>(n));

  cofactors_.resize(n + 1);
  scale_.resize(n + 1);
  detail::parallel_for(n + 1, [&](std::size_t k) {
    PrecisionScope worker_scope(bits_);
    const std::size_t na = n - k;
    std::vector<SchurArgument> entries;
    if (na > 0) entries.push_back({a, na});
    if (k > 0) entries.push_back({b, k});
    const ArgumentMultiset shared(entries);

    // Rows for a^{n-k}, b^k, then a generic last row; the cofactors of the
    // last row turn every S_lambda(a^{n-k}, b^k, x) into a dot product.
    std::vector<SchurArgument> with_generic = entries;
    with_generic.push_back({generic, 1});
    RealMatrix m = detail::confluent_rows(top_exponents_, ArgumentMultiset(std::move(with_generic)));
    const LuDecomposition lu(m);
    std::vector<Real> unit(n + 1, Real(0.0, bits_));
    unit[n] = Real(1.0, bits_);
    std::vector<Real> cof = lu.solve(unit);
    const Real det = lu.determinant();
    for (auto& c : cof) c *= det;

    auto dot = [&](const std::vector<Real>& row) {
      Real acc(0.0, bits_);
      for (std::size_t j = 0; j <= n; ++j) acc.add_product(cof[j], row[j]);
      return acc;
    };
    const auto vandermonde = [](std::vector<SchurArgument> e) {
      return detail::confluent_vandermonde(ArgumentMultiset(std::move(e)));
    };

    // S_lambda(a^{n+1-k}, b^k): the extra a row sits last, k rows below its
    // standard slot, which flips numerator and denominator alike.
    std::vector<SchurArgument> ea;
    ea.push_back({a, na + 1});
    if (k > 0) ea.push_back({b, k});
    const Real s_a = dot(detail::confluent_row(top_exponents_, a, na)) / vandermonde(ea) *
                     Real(k % 2 == 0 ? 1.0 : -1.0, bits_);

    std::vector<SchurArgument> eb;
    if (na > 0) eb.push_back({a, na});
    eb.push_back({b, k + 1});
    const Real s_b = dot(detail::confluent_row(top_exponents_, b, k)) / vandermonde(eb);

    // Deleting the generic row and the first column leaves the numerator of
    // S_lambda0(a^{n-k}, b^k); its cofactor is already in hand.
    Real s_bottom = cof[0] / detail::confluent_vandermonde(shared);
    if (n % 2 == 1) s_bottom = -s_bottom;

    // Denominator of S_lambda(a^{n-k}, b^k, x) without the (a-x), (b-x) factors.
    const bool flip = ((na * (na - 1) / 2) + (k * (k - 1) / 2)) % 2 == 1;
    Real v_rest = pow(a - b, static_cast<long>(na * k));
    if (flip) v_rest = -v_rest;

    Real binom(1.0, bits_);
    for (std::size_t i = 1; i <= k; ++i) {
      binom *= Real(static_cast<double>(n - k + i), bits_);
      binom /= Real(static_cast<double>(i), bits_);
    }
    scale_[k] = k_const * binom / width_pow * s_bottom / (s_a * s_b) / v_rest;
    cofactors_[k] = std::move(cof);
  });
}

std::vector<Real> ChebyshevBernsteinBasis::values(const Real& t_in) const {
  const std::size_t n = exponents_.size() - 1;
  PrecisionScope scope(bits_);
  Real t = t_in;
  t.set_bits(std::max(bits_, t.bits()));
  std::vector<Real> out(n + 1, Real(0.0, bits_));
  if (n == 0) {
    out[0] = Real(1.0, bits_);
    return out;
  }
  const Real a(interval_.a, bits_);
  const Real b(interval_.b, bits_);
  if (t < a || t > b) {
    throw DomainError("t = " + t.to_string(17) + " outside [" + std::to_string(interval_.a) + ", " +
                      std::to_string(interval_.b) + "]");
  }
  if (t == a) {
    out[0] = Real(1.0, bits_);
    return out;
  }
  if (t == b) {
    out[n] = Real(1.0, bits_);
    return out;
  }
  const Real x = a * b / t;
  std::vector<Real> row;
  row.reserve(n + 1);
  for (double e : top_exponents_) row.push_back(e == 0.0 ? Real(1.0, bits_) : pow(x, Real(e, bits_)));
  const Real t_over_b = t / b;
  const Real minus_t_over_a = -(t / a);
  const Real t_lambda1 = pow(t, Real(exponents_[n] - static_cast<double>(n), bits_));
  for (std::size_t k = 0; k <= n; ++k) {
    Real acc(0.0, bits_);
    for (std::size_t j = 0; j <= n; ++j) acc.add_product(cofactors_[k][j], row[j]);
    acc *= scale_[k];
    acc *= pow(t_over_b, static_cast<long>(k));
    acc *= pow(minus_t_over_a, static_cast<long>(n - k));
    acc *= t_lambda1;
    out[k] = std::move(acc);
  }
  return out;
}

Real chebyshev_basis_eval(const std::vector<double>& exponents, std::size_t k, double t,
                          Interval interval, const PrecisionContext& ctx) {
  validate_exponents(exponents);
  BasisKind::chebyshev(interval);
  const std::size_t n = exponents.size() - 1;
  if (k > n) throw ValidationError("basis index " + std::to_string(k) + " out of range");
  if (!(t >= interval.a && t <= interval.b)) throw DomainError("t outside the interval");
  if (n == 0) return Real(1.0, ctx.significand_bits);
  if (t == interval.a) return Real(k == 0 ? 1.0 : 0.0, ctx.significand_bits);
  if (t == interval.b) return Real(k == n ? 1.0 : 0.0, ctx.significand_bits);

  const unsigned bits = chebyshev_basis_bits(n, ctx);
  const PrecisionContext wide = ctx.with_bits(bits);
  PrecisionScope scope(bits);
  const Real a(interval.a, bits);
  const Real b(interval.b, bits);
  const Real tt(t, bits);
  const Real x = a * b / tt;
  const RealPartition lambda = partition_from_exponents(exponents);
  const RealPartition lambda0 = bottom_partition(lambda);

  auto args = [&](std::size_t ma, std::size_t mb, bool with_x) {
    std::vector<SchurArgument> e;
    if (ma > 0) e.push_back({a, ma});
    if (mb > 0) e.push_back({b, mb});
    if (with_x) e.push_back({x, 1});
    return ArgumentMultiset(std::move(e));
  };
  const Real k_const = schur_all_ones(lambda, wide) / schur_all_ones(lambda0, wide);
  Real binom(1.0, bits);
  for (std::size_t i = 1; i <= k; ++i) {
    binom *= Real(static_cast<double>(n - k + i), bits);
    binom /= Real(static_cast<double>(i), bits);
  }
  const Real bern = binom * pow(tt - a, static_cast<long>(k)) * pow(b - tt, static_cast<long>(n - k)) /
                    pow(b - a, static_cast<long>(n));
  const Real num = schur_eval(lambda0, args(n - k, k, false), wide).value *
                   pow(tt, Real(lambda[0], bits)) * schur_eval(lambda, args(n - k, k, true), wide).value;
  const Real den = schur_eval(lambda, args(n + 1 - k, k, false), wide).value *
                   schur_eval(lambda, args(n - k, k + 1, false), wide).value;
  Real out = k_const * bern * num / den;
  out.set_bits(ctx.significand_bits);
  return out;
}

ChebyshevDualFunctionals::ChebyshevDualFunctionals(double a, unsigned bits)
    : a_(a), bits_(bits), a_real_(a, bits) {
  if (!(a > 0.0 && a < 1.0)) throw DomainError("dual functionals need 0 < a < 1");
  exponents_ = {0.0};
  newton_ = {{Real(1.0, bits_)}};
  forward_column_ = {Real(1.0, bits_)};
  inverse_column_ = {Real(1.0, bits_)};
  inverse_diagonal_ = {Real(1.0, bits_)};
}

std::vector<Real> ChebyshevDualFunctionals::advance(double next_exponent) {
  const std::size_t m = degree();
  if (!(next_exponent > exponents_.back()) || !std::isfinite(next_exponent)) {
    throw MonotonicityError(m, "next exponent must exceed r_" + std::to_string(m));
  }
  PrecisionScope scope(bits_);
  const std::size_t big = m + 1;
  const Real r_new(next_exponent, bits_);
  const Real power = pow(a_real_, r_new);

  std::vector<Real> fwd(big + 1);
  std::vector<Real> inv(big + 1);
  fwd[big] = power;
  inv[big] = Real(1.0, bits_) / power;
  for (std::size_t j = big; j-- > 0;) {
    const Real gap = r_new - Real(exponents_[j], bits_);
    fwd[j] = (fwd[j + 1] - forward_column_[j]) / gap;
    inv[j] = (inv[j + 1] - inverse_column_[j]) / gap;
  }

  // g_i = eta_i applied to the divided difference [r_0..r_{m+1}] in x of t^x.
  std::vector<Real> g(m + 1);
  for (std::size_t i = 0; i <= m; ++i) {
    Real acc(0.0, bits_);
    for (std::size_t j = 0; j <= i; ++j) acc.add_product(newton_[i][j], fwd[j]);
    g[i] = std::move(acc);
  }
  std::vector<Real> xi(m);
  for (std::size_t i = 1; i <= m; ++i) {
    const Real den = g[i - 1] - g[i];
    if (den.is_zero()) throw NumericalFailure("dual functional update divides by zero");
    xi[i - 1] = g[i - 1] / den;
  }

  std::vector<std::vector<Real>> next(big + 1);
  next[0] = {Real(1.0, bits_)};
  for (std::size_t i = 1; i <= m; ++i) {
    const Real& w = xi[i - 1];
    const Real keep = Real(1.0, bits_) - w;
    std::vector<Real> c(i + 1, Real(0.0, bits_));
    for (std::size_t j = 0; j < i; ++j) c[j] = keep * newton_[i - 1][j];
    for (std::size_t j = 0; j <= i; ++j) c[j].add_product(w, newton_[i][j]);
    next[i] = std::move(c);
  }
  inverse_diagonal_.push_back(inv[0]);
  next[big] = inverse_diagonal_;

  newton_ = std::move(next);
  forward_column_ = std::move(fwd);
  inverse_column_ = std::move(inv);
  exponents_.push_back(next_exponent);
  return xi;
}

std::vector<Real> ChebyshevDualFunctionals::monomial_control_points(std::size_t p) const {
  const std::size_t m = degree();
  if (p > m) throw ValidationError("monomial index beyond the current space");
  PrecisionScope scope(bits_);
  const Real rp(exponents_[p], bits_);
  // omega_j(r_p) = prod_{u<j} (r_p - r_u); zero for j > p.
  std::vector<Real> omega(p + 1);
  omega[0] = Real(1.0, bits_);
  for (std::size_t j = 1; j <= p; ++j) omega[j] = omega[j - 1] * (rp - Real(exponents_[j - 1], bits_));
  const Real scale = exponents_[p] == 0.0 ? Real(1.0, bits_) : pow(a_real_, rp);
  std::vector<Real> out(m + 1);
  for (std::size_t i = 0; i <= m; ++i) {
    Real acc(0.0, bits_);
    const std::size_t top = std::min(i, p);
    for (std::size_t j = 0; j <= top; ++j) acc.add_product(newton_[i][j], omega[j]);
    out[i] = acc * scale;
  }
  return out;
}

RealMatrix ChebyshevDualFunctionals::monomial_matrix() const {
  const std::size_t m = degree();
  RealMatrix n(m + 1, m + 1);
  for (std::size_t p = 0; p <= m; ++p) {
    auto col = monomial_control_points(p);
    for (std::size_t i = 0; i <= m; ++i) n(i, p) = std::move(col[i]);
  }
  return n;
}

unsigned dual_functional_bits(std::size_t m, const PrecisionContext& ctx) {
  return std::max(ctx.significand_bits + 64, 128 + 4 * static_cast<unsigned>(m));
}

namespace {

std::vector<Point> gelfond_lift(const MuntzElement& p, const std::vector<double>& target) {
  const std::size_t m = target.size() - 1;
  const std::size_t s = p.dimension();
  std::vector<Point> out(m + 1, Point(s, 0.0));
  for (std::size_t q = 0; q < p.exponents().size(); ++q) {
    const std::size_t idx = index_of(target, p.exponents()[q]);
    // t^{r_idx} = H_idx over Lambda_idx; raise the dimension up to m.
    std::vector<double> w(idx + 1, 0.0);
    w[idx] = 1.0;
    for (std::size_t big = idx + 1; big <= m; ++big) {
      std::vector<double> next(big + 1);
      next[0] = w[0];
      next[big] = w[big - 1];
      for (std::size_t i = 1; i < big; ++i) {
        const double lam = target[i] / target[big];
        next[i] = lam * w[i - 1] + (1.0 - lam) * w[i];
      }
      w = std::move(next);
    }
    for (std::size_t i = 0; i <= m; ++i)
      for (std::size_t c = 0; c < s; ++c) out[i][c] += w[i] * p.coefficients()[q][c];
  }
  return out;
}

std::vector<Point> dual_points(const MuntzElement& p, const std::vector<double>& target,
                               const Interval& interval, unsigned bits) {
  const std::size_t m = target.size() - 1;
  const std::size_t s = p.dimension();
  ChebyshevDualFunctionals eta(interval.a / interval.b, bits);
  for (std::size_t i = 1; i <= m; ++i) eta.advance(target[i]);
  PrecisionScope scope(bits);
  const Real b(interval.b, bits);
  std::vector<std::vector<Real>> acc(m + 1, std::vector<Real>(s, Real(0.0, bits)));
  for (std::size_t q = 0; q < p.exponents().size(); ++q) {
    const std::size_t idx = index_of(target, p.exponents()[q]);
    const auto col = eta.monomial_control_points(idx);
    const Real scale = pow(b, Real(target[idx], bits));
    for (std::size_t c = 0; c < s; ++c) {
      const Real coeff = Real(p.coefficients()[q][c], bits) * scale;
      for (std::size_t i = 0; i <= m; ++i) acc[i][c].add_product(col[i], coeff);
    }
  }
  std::vector<Point> out(m + 1, Point(s));
  for (std::size_t i = 0; i <= m; ++i)
    for (std::size_t c = 0; c < s; ++c) out[i][c] = acc[i][c].to_double();
  return out;
}

bool close_points(const std::vector<Point>& x, const std::vector<Point>& y, double tol) {
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t c = 0; c < x[i].size(); ++c)
      if (std::abs(x[i][c] - y[i][c]) > tol) return false;
  return true;
}

double coefficient_scale(const MuntzElement& p, double b) {
  double s = 0.0;
  for (std::size_t q = 0; q < p.exponents().size(); ++q)
    for (double c : p.coefficients()[q]) s = std::max(s, std::abs(c) * std::pow(b, p.exponents()[q]));
  return s;
}

}  // namespace

ControlPolygon control_points(const MuntzElement& p, const std::vector<double>& target,
                              const BasisKind& basis, const PrecisionContext& ctx) {
  ctx.validate();
  validate_exponents(target);
  for (double r : p.exponents()) index_of(target, r);
  if (basis.tag == BasisKind::Tag::gelfond) {
    if (basis.interval != Interval{0.0, 1.0}) throw DomainError("Gelfond-Bernstein bases live on [0, 1]");
    return {gelfond_lift(p, target), target, basis};
  }
  const Interval iv = BasisKind::chebyshev(basis.interval).interval;
  const std::size_t m = target.size() - 1;
  unsigned bits = dual_functional_bits(m, ctx);
  const double scale = coefficient_scale(p, iv.b) + 1.0;
  const double tol = std::ldexp(scale, -static_cast<int>(std::min(ctx.significand_bits, 60u)));
  for (int attempt = 0; attempt < 2; ++attempt, bits *= 4) {
    auto primary = dual_points(p, target, iv, bits);
    const auto shadow = dual_points(p, target, iv, bits + 64);
    if (close_points(primary, shadow, tol)) return {std::move(primary), target, basis};
  }
  throw NumericalFailure("control points did not stabilize at " + std::to_string(bits / 4) + " bits");
}

ControlPolygon collocation_control_points(const MuntzElement& p, const std::vector<double>& target,
                                          const BasisKind& basis, const PrecisionContext& ctx) {
  ctx.validate();
  validate_exponents(target);
  for (double r : p.exponents()) index_of(target, r);
  const std::size_t m = target.size() - 1;
  const std::size_t s = p.dimension();
  const bool gelfond = basis.tag == BasisKind::Tag::gelfond;
  const Interval iv = gelfond ? Interval{0.0, 1.0} : BasisKind::chebyshev(basis.interval).interval;

  const GelfondBernsteinBasis gb(target);
  const unsigned bits = gelfond ? gb.working_bits(ctx) : chebyshev_basis_bits(m, ctx);
  std::optional<ChebyshevBernsteinBasis> cb;
  if (!gelfond) cb.emplace(target, iv, bits);
  PrecisionScope scope(bits);

  RealMatrix a(m + 1, m + 1);
  RealMatrix rhs(m + 1, s);
  const Real half(0.5, bits);
  const Real mid = (Real(iv.a, bits) + Real(iv.b, bits)) * half;
  const Real rad = (Real(iv.b, bits) - Real(iv.a, bits)) * half;
  const Real pi_val = pi(bits);
  for (std::size_t j = 0; j <= m; ++j) {
    // cos((2j+1) pi / (2(m+1))) never hits +-1, so the nodes avoid both ends.
    const Real angle = pi_val * Real(static_cast<double>(2 * j + 1), bits) /
                 Real(static_cast<double>(2 * (m + 1)), bits);
    const Real c = cos(angle);
    const Real node = mid + rad * c;
    const auto row = gelfond ? gb.values(node, ctx) : cb->values(node);
    for (std::size_t k = 0; k <= m; ++k) a(j, k) = row[k];
    const auto pv = p.value(node);
    for (std::size_t c2 = 0; c2 < s; ++c2) rhs(j, c2) = pv[c2];
  }
  const RealMatrix x = qr_solve(std::move(a), std::move(rhs), std::ldexp(1.0, -static_cast<int>(bits / 2)));
  std::vector<Point> pts(m + 1, Point(s));
  for (std::size_t k = 0; k <= m; ++k)
    for (std::size_t c = 0; c < s; ++c) pts[k][c] = x(k, c).to_double();
  return {std::move(pts), target, gelfond ? BasisKind::gelfond() : basis};
}

std::vector<Point> evaluate_polygon(const ControlPolygon& polygon, std::span<const double> ts,
                                    const PrecisionContext& ctx) {
  polygon.validate();
  const std::size_t m = polygon.size() - 1;
  const std::size_t s = polygon.points.front().size();
  std::vector<Point> out(ts.size(), Point(s, 0.0));
  auto accumulate = [&](std::size_t idx, const std::vector<Real>& basis) {
    const unsigned bits = basis.front().bits();
    for (std::size_t c = 0; c < s; ++c) {
      Real acc(0.0, bits);
      for (std::size_t k = 0; k <= m; ++k) acc.add_product(basis[k], Real(polygon.points[k][c], bits));
      out[idx][c] = acc.to_double();
    }
  };
  if (polygon.basis.tag == BasisKind::Tag::gelfond) {
    const GelfondBernsteinBasis gb(polygon.exponents);
    detail::parallel_for(ts.size(), [&](std::size_t i) { accumulate(i, gb.values(ts[i], ctx)); });
    return out;
  }
  const Interval iv = polygon.basis.interval;
  const Interval unit{iv.a / iv.b, 1.0};
  const ChebyshevBernsteinBasis cb(polygon.exponents, unit, chebyshev_basis_bits(m, ctx));
  detail::parallel_for(ts.size(), [&](std::size_t i) {
    const unsigned bits = cb.bits();
    PrecisionScope scope(bits);
    Real t = Real(ts[i], bits) / Real(iv.b, bits);
    if (ts[i] == iv.a) t = Real(unit.a, bits);
    if (ts[i] == iv.b) t = Real(1.0, bits);
    accumulate(i, cb.values(t));
  });
  return out;
}

Point evaluate_polygon(const ControlPolygon& polygon, double t, const PrecisionContext& ctx) {
  const double ts[1] = {t};
  return evaluate_polygon(polygon, std::span<const double>(ts, 1), ctx).front();
}

MuntzElement to_monomial(const ControlPolygon& polygon, const PrecisionContext& ctx) {
  polygon.validate();
  const std::size_t m = polygon.size() - 1;
  const std::size_t s = polygon.points.front().size();
  std::vector<Point> coeffs(m + 1, Point(s, 0.0));
  if (polygon.basis.tag == BasisKind::Tag::gelfond) {
    const GelfondBernsteinBasis gb(polygon.exponents);
    const unsigned bits = gb.working_bits(ctx);
    const RealMatrix mono = gb.monomial_coefficients(bits);
    for (std::size_t c = 0; c < s; ++c) {
      for (std::size_t p = 0; p <= m; ++p) {
        Real acc(0.0, bits);
        for (std::size_t k = 0; k <= p; ++k) acc.add_product(mono(k, p), Real(polygon.points[k][c], bits));
        coeffs[p][c] = acc.to_double();
      }
    }
    return MuntzElement(polygon.exponents, std::move(coeffs));
  }
  const Interval iv = polygon.basis.interval;
  const unsigned bits = dual_functional_bits(m, ctx) + 64;
  ChebyshevDualFunctionals eta(iv.a / iv.b, bits);
  for (std::size_t i = 1; i <= m; ++i) eta.advance(polygon.exponents[i]);
  PrecisionScope scope(bits);
  const LuDecomposition lu(eta.monomial_matrix());
  for (std::size_t c = 0; c < s; ++c) {
    std::vector<Real> rhs;
    for (std::size_t i = 0; i <= m; ++i) rhs.push_back(Real(polygon.points[i][c], bits));
    const auto sol = lu.solve(rhs);
    for (std::size_t p = 0; p <= m; ++p) {
      coeffs[p][c] = (sol[p] / pow(Real(iv.b, bits), Real(polygon.exponents[p], bits))).to_double();
    }
  }
  return MuntzElement(polygon.exponents, std::move(coeffs));
}

double theorem4_gap(const std::vector<double>& exponents, double a,
                    std::optional<std::vector<double>> sample_ts, const PrecisionContext& ctx) {
  validate_exponents(exponents);
  if (!(a > 0.0 && a < 1.0)) throw DomainError("theorem4_gap needs 0 < a < 1");
  const std::size_t n = exponents.size() - 1;
  std::vector<double> ts;
  if (sample_ts) {
    ts = std::move(*sample_ts);
  } else {
    const double lo = std::max(a, 1e-3);
    for (int i = 0; i < 33; ++i) ts.push_back(lo + (1.0 - lo) * i / 32.0);
  }
  if (ts.empty()) throw ValidationError("theorem4_gap needs a nonempty grid");
  if (n == 0) return 0.0;
  const GelfondBernsteinBasis gb(exponents);
  const ChebyshevBernsteinBasis cb(exponents, Interval{a, 1.0}, chebyshev_basis_bits(n, ctx));
  double gap = 0.0;
  for (double t : ts) {
    if (t < a || t > 1.0) throw DomainError("theorem4_gap grid point outside [a, 1]");
    const auto h = gb.values(t, ctx);
    const auto bv = cb.values(t);
    for (std::size_t k = 0; k <= n; ++k) gap = std::max(gap, abs(bv[k] - h[k]).to_double());
  }
  return gap;
}

double divdiff_schur_identity_residual(const std::vector<double>& exponents, double t,
                                       const PrecisionContext& ctx) {
  validate_exponents(exponents);
  if (!(t > 0.0 && t < 1.0)) throw DomainError("identity residual needs t in (0, 1)");
  const std::size_t n = exponents.size() - 1;
  if (n == 0) return 0.0;
  const unsigned bits = GelfondBernsteinBasis(exponents).working_bits(ctx) + 8 * static_cast<unsigned>(n);
  const PrecisionContext wide = ctx.with_bits(bits);
  PrecisionScope scope(bits);
  const Real tt(t, bits);
  const NodeSet nodes(exponents);
  const Real lhs = divided_difference(nodes, ft_values(tt, nodes), wide);

  const RealPartition lambda = partition_from_exponents(exponents);
  const RealPartition lambda0 = bottom_partition(lambda);
  const ArgumentMultiset with_one(std::vector<SchurArgument>{{Real(1.0, bits), 1}, {tt, n}});
  const ArgumentMultiset only_t(std::vector<SchurArgument>{{tt, n}});
  Real prod(1.0, bits);
  for (std::size_t i = 1; i <= n; ++i) prod *= Real(exponents[i], bits);
  Real rhs = pow(Real(1.0, bits) - tt, static_cast<long>(n)) / prod *
             schur_eval(lambda, with_one, wide).value / schur_eval(lambda0, only_t, wide).value;
  if (n % 2 == 1) rhs = -rhs;
  return abs(lhs - rhs).to_double();
}

}  // namespace muntz
