#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "muntz/exponents.hpp"
#include "muntz/linalg.hpp"
#include "muntz/numerics.hpp"
#include "muntz/real.hpp"

namespace muntz {

using Point = std::vector<double>;

/// P(t) = sum_k t^{r_k} A_k with vector coefficients A_k in R^s.
class MuntzElement {
 public:
  MuntzElement(std::vector<double> exponents, std::vector<Point> coefficients);
  /// Scalar element from plain coefficients.
  static MuntzElement scalar(std::vector<double> exponents, std::vector<double> coefficients);

  const std::vector<double>& exponents() const { return exponents_; }
  const std::vector<Point>& coefficients() const { return coefficients_; }
  std::size_t dimension() const { return coefficients_.front().size(); }

  Point value(double t) const;
  Point derivative(double t) const;
  /// Value at width `bits`, one Real per coordinate.
  std::vector<Real> value(const Real& t) const;

 private:
  std::vector<double> exponents_;
  std::vector<Point> coefficients_;
};

struct BasisKind {
  enum class Tag { gelfond, chebyshev };
  Tag tag = Tag::gelfond;
  Interval interval{0.0, 1.0};

  static BasisKind gelfond() { return {}; }
  /// Throws DomainError unless interval.a > 0.
  static BasisKind chebyshev(Interval interval);

  friend bool operator==(const BasisKind&, const BasisKind&) = default;
};

struct ControlPolygon {
  std::vector<Point> points;
  std::vector<double> exponents;
  BasisKind basis;

  std::size_t size() const { return points.size(); }
  /// Throws ValidationError unless |points| = |exponents| and all points share a dimension.
  void validate() const;
};

/// H_{k}^n over [0,1] for all k at once.
class GelfondBernsteinBasis {
 public:
  explicit GelfondBernsteinBasis(std::vector<double> exponents);

  std::size_t size() const { return exponents_.size(); }
  const std::vector<double>& exponents() const { return exponents_; }
  /// Width at which values() runs so that the result carries ctx.significand_bits.
  unsigned working_bits(const PrecisionContext& ctx) const;
  /// H_0(t), ..., H_n(t), t in [0,1].
  std::vector<Real> values(double t, const PrecisionContext& ctx) const;
  std::vector<Real> values(const Real& t, const PrecisionContext& ctx) const;
  /// H_k(t) = sum_p M(k, p) t^{r_p}; M is upper triangular.
  RealMatrix monomial_coefficients(unsigned bits) const;

 private:
  std::vector<double> exponents_;
  double amplification_bits_ = 0.0;
};

/// H_{k,Lambda_n}^n(t) = (-1)^{n-k} r_{k+1}...r_n [r_k..r_n] f_t, H_n = t^{r_n}.
Real gelfond_basis_eval(const std::vector<double>& exponents, std::size_t k, double t,
                        const PrecisionContext& ctx);

/// B_{k}^n over [a,b], a > 0, for all k at once from the determinant closed
/// form. Every Schur quotient that does not involve t is prepared once.
class ChebyshevBernsteinBasis {
 public:
  ChebyshevBernsteinBasis(std::vector<double> exponents, Interval interval, unsigned bits);

  std::size_t size() const { return exponents_.size(); }
  unsigned bits() const { return bits_; }
  const Interval& interval() const { return interval_; }
  /// B_0(t), ..., B_n(t) for t in [a,b].
  std::vector<Real> values(const Real& t) const;
  std::vector<Real> values(double t) const { return values(Real(t, bits_)); }

 private:
  std::vector<double> exponents_;
  Interval interval_;
  unsigned bits_;
  std::vector<double> top_exponents_;  // r_n - r_j, j = 0..n
  // B_k(t) = scale_k * (t/b)^k (-t/a)^{n-k} t^{lambda_1} * <cofactor_k, row(ab/t)>
  std::vector<std::vector<Real>> cofactors_;
  std::vector<Real> scale_;
};

/// Working width used for the closed form with n + 1 basis functions.
unsigned chebyshev_basis_bits(std::size_t n, const PrecisionContext& ctx);

/// One Chebyshev-Bernstein value from five independent Schur evaluations.
Real chebyshev_basis_eval(const std::vector<double>& exponents, std::size_t k, double t,
                          Interval interval, const PrecisionContext& ctx);

/// Dual functionals eta_i of the Chebyshev-Bernstein basis of E(Lambda_m)
/// over [a,1], advanced one dimension at a time.
///
/// eta_i(t^x) = q_i(x) a^x where q_i is a polynomial of degree <= i, stored by
/// its Newton coefficients on r_0, r_1, .... Raising the dimension maps
/// eta_i to (1 - xi_i) eta_{i-1} + xi_i eta_i, and xi_i is the unique weight
/// for which the new functional annihilates t^{r_{m+1}}.
class ChebyshevDualFunctionals {
 public:
  ChebyshevDualFunctionals(double a, unsigned bits);

  double a() const { return a_; }
  unsigned bits() const { return bits_; }
  /// Index m of the current space E(Lambda_m).
  std::size_t degree() const { return exponents_.size() - 1; }
  const std::vector<double>& exponents() const { return exponents_; }

  /// Moves to E(Lambda_{m+1}) and returns xi_1..xi_m of that step.
  std::vector<Real> advance(double next_exponent);
  /// eta_i(t^{r_p}) for i = 0..m.
  std::vector<Real> monomial_control_points(std::size_t p) const;
  /// eta_i(t^{r_p}) for i = 0..m and every p: N(i, p).
  RealMatrix monomial_matrix() const;

 private:
  double a_;
  unsigned bits_;
  Real a_real_;
  std::vector<double> exponents_;
  std::vector<std::vector<Real>> newton_;  // newton_[i][j]
  std::vector<Real> forward_column_;       // [r_j..r_m] f_a
  std::vector<Real> inverse_column_;       // [r_j..r_m] f_{1/a}
  std::vector<Real> inverse_diagonal_;     // [r_0..r_j] f_{1/a}
};

/// Starting width for dual-functional runs up to E(Lambda_m); cancellation in
/// the divided-difference column costs a few bits per dimension.
unsigned dual_functional_bits(std::size_t m, const PrecisionContext& ctx);

/// Control points of P in the basis of E(target_exponents). The gelfond kind
/// lifts each monomial exactly with the inductive corner-cutting weights; the
/// chebyshev kind evaluates the dual functionals over [a/b, 1].
ControlPolygon control_points(const MuntzElement& p, const std::vector<double>& target_exponents,
                              const BasisKind& basis, const PrecisionContext& ctx);

/// Same coefficients by square collocation at Chebyshev-distributed nodes and
/// a QR solve, evaluating the basis functions directly.
ControlPolygon collocation_control_points(const MuntzElement& p,
                                          const std::vector<double>& target_exponents,
                                          const BasisKind& basis, const PrecisionContext& ctx);

/// sum_k points_k * basis_k(t), evaluated with the basis of the polygon.
Point evaluate_polygon(const ControlPolygon& polygon, double t, const PrecisionContext& ctx);
/// Same at many parameters, sharing the basis setup.
std::vector<Point> evaluate_polygon(const ControlPolygon& polygon, std::span<const double> ts,
                                    const PrecisionContext& ctx);

/// The curve a control polygon represents, in monomial form.
MuntzElement to_monomial(const ControlPolygon& polygon, const PrecisionContext& ctx);

/// max over k and the grid of |B_k(t; [a,1]) - H_k(t)|. The default grid is
/// 33 equispaced points in [max(a, 1e-3), 1].
double theorem4_gap(const std::vector<double>& exponents, double a,
                    std::optional<std::vector<double>> sample_ts, const PrecisionContext& ctx);

/// |[r_0..r_n] f_t - (-1)^n / (r_1...r_n) (1-t)^n S_lambda(1, t^n) / S_lambda0(t^n)|.
double divdiff_schur_identity_residual(const std::vector<double>& exponents, double t,
                                       const PrecisionContext& ctx);

}  // namespace muntz
