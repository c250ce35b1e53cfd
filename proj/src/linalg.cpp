#include "muntz/linalg.hpp"

#include <utility>

#include "muntz/errors.hpp"

namespace muntz {

LuDecomposition::LuDecomposition(RealMatrix a) : lu_(std::move(a)) {
  const std::size_t n = lu_.rows();
  if (n != lu_.cols()) throw DomainError("LU factorization needs a square matrix");
  perm_.resize(n);
  for (std::size_t i = 0; i < n; ++i) perm_[i] = i;

  for (std::size_t c = 0; c < n; ++c) {
    std::size_t pivot = c;
    Real best = abs(lu_(c, c));
    for (std::size_t r = c + 1; r < n; ++r) {
      Real cand = abs(lu_(r, c));
      if (cand > best) {
        best = std::move(cand);
        pivot = r;
      }
    }
    if (best.is_zero()) {
      singular_ = true;
      continue;
    }
    if (pivot != c) {
      for (std::size_t j = 0; j < n; ++j) std::swap(lu_(pivot, j), lu_(c, j));
      std::swap(perm_[pivot], perm_[c]);
      parity_ = -parity_;
    }
    for (std::size_t r = c + 1; r < n; ++r) {
      if (lu_(r, c).is_zero()) continue;
      lu_(r, c) /= lu_(c, c);
      const Real& factor = lu_(r, c);
      for (std::size_t j = c + 1; j < n; ++j) lu_(r, j).sub_product(factor, lu_(c, j));
    }
  }
}

Real LuDecomposition::determinant() const {
  const std::size_t n = lu_.rows();
  if (singular_ || n == 0) return Real(singular_ ? 0.0 : 1.0);
  Real det = lu_(0, 0);
  for (std::size_t i = 1; i < n; ++i) det *= lu_(i, i);
  return parity_ < 0 ? -det : det;
}

std::vector<Real> LuDecomposition::solve(std::span<const Real> b) const {
  if (singular_) throw NumericalFailure("linear system is singular");
  const std::size_t n = lu_.rows();
  if (b.size() != n) throw DomainError("right-hand side has the wrong length");
  std::vector<Real> x(n);
  for (std::size_t i = 0; i < n; ++i) {
    Real acc = b[perm_[i]];
    for (std::size_t j = 0; j < i; ++j) acc.sub_product(lu_(i, j), x[j]);
    x[i] = std::move(acc);
  }
  for (std::size_t ii = n; ii-- > 0;) {
    Real acc = x[ii];
    for (std::size_t j = ii + 1; j < n; ++j) acc.sub_product(lu_(ii, j), x[j]);
    x[ii] = acc / lu_(ii, ii);
  }
  return x;
}

Real determinant(RealMatrix a) { return LuDecomposition(std::move(a)).determinant(); }

RealMatrix qr_solve(RealMatrix a, RealMatrix b, double rank_tolerance) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  const std::size_t k = b.cols();
  if (m < n) throw DomainError("QR solve needs rows >= cols");
  if (b.rows() != m) throw DomainError("right-hand side row count mismatch");

  std::vector<Real> diag(n);
  for (std::size_t c = 0; c < n; ++c) {
    Real norm2(0.0, a(c, c).bits());
    for (std::size_t r = c; r < m; ++r) norm2.add_product(a(r, c), a(r, c));
    Real alpha = sqrt(norm2);
    if (a(c, c).sign() > 0) alpha = -alpha;
    diag[c] = alpha;
    if (alpha.is_zero()) continue;
    // Householder vector v = x - alpha e_1 stored in column c, rows c..m-1.
    a(c, c) -= alpha;
    Real vnorm2(0.0, alpha.bits());
    for (std::size_t r = c; r < m; ++r) vnorm2.add_product(a(r, c), a(r, c));
    if (vnorm2.is_zero()) continue;
    auto reflect = [&](auto& target, std::size_t col) {
      Real dot(0.0, alpha.bits());
      for (std::size_t r = c; r < m; ++r) dot.add_product(a(r, c), target(r, col));
      dot /= vnorm2;
      dot *= Real(2.0);
      for (std::size_t r = c; r < m; ++r) target(r, col).sub_product(dot, a(r, c));
    };
    for (std::size_t j = c + 1; j < n; ++j) reflect(a, j);
    for (std::size_t j = 0; j < k; ++j) reflect(b, j);
  }

  Real largest(0.0);
  for (const Real& d : diag) largest = max(largest, abs(d));
  for (const Real& d : diag) {
    if (abs(d) <= largest * Real(rank_tolerance)) {
      throw NumericalFailure("collocation system is singular beyond tolerance");
    }
  }

  RealMatrix x(n, k);
  for (std::size_t j = 0; j < k; ++j) {
    for (std::size_t ii = n; ii-- > 0;) {
      Real acc = b(ii, j);
      for (std::size_t c = ii + 1; c < n; ++c) acc.sub_product(a(ii, c), x(c, j));
      x(ii, j) = acc / diag[ii];
    }
  }
  return x;
}

}  // namespace muntz
