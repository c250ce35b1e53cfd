#pragma once

// Independent reference computations and random generators shared by the tests.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "muntz/real.hpp"

namespace oracle {

using muntz::Real;

inline constexpr unsigned kBits = 320;

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  std::size_t index(std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng_);
  }

  /// (0, r_1, ..., r_n) with gaps in [min_gap, max_gap].
  std::vector<double> exponents(std::size_t n, double min_gap = 0.3, double max_gap = 2.5) {
    std::vector<double> r{0.0};
    for (std::size_t i = 0; i < n; ++i) r.push_back(r.back() + uniform(min_gap, max_gap));
    return r;
  }

  std::vector<double> sorted_points(std::size_t count, double lo, double hi, double min_sep) {
    for (;;) {
      std::vector<double> x(count);
      for (double& v : x) v = uniform(lo, hi);
      std::sort(x.begin(), x.end());
      bool ok = true;
      for (std::size_t i = 1; i < count; ++i) ok = ok && x[i] - x[i - 1] > min_sep;
      if (ok) return x;
    }
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

inline double binomial(std::size_t n, std::size_t k) {
  double c = 1.0;
  for (std::size_t i = 1; i <= k; ++i) c = c * static_cast<double>(n - k + i) / static_cast<double>(i);
  return c;
}

/// C(n,k) ((t-a)/(b-a))^k ((b-t)/(b-a))^{n-k}.
inline double classical_bernstein(std::size_t n, std::size_t k, double t, double a = 0.0, double b = 1.0) {
  const double u = (t - a) / (b - a);
  return binomial(n, k) * std::pow(u, static_cast<double>(k)) * std::pow(1.0 - u, static_cast<double>(n - k));
}

/// Gaussian elimination with partial pivoting on an augmented copy; returns x with A x = rhs.
inline std::vector<Real> solve(std::vector<std::vector<Real>> a, std::vector<Real> rhs) {
  const std::size_t n = a.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r) {
      if (muntz::abs(a[r][c]) > muntz::abs(a[piv][c])) piv = r;
    }
    if (a[piv][c].is_zero()) throw std::runtime_error("oracle system is singular");
    std::swap(a[c], a[piv]);
    std::swap(rhs[c], rhs[piv]);
    for (std::size_t r = c + 1; r < n; ++r) {
      const Real f = a[r][c] / a[c][c];
      for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
      rhs[r] -= f * rhs[c];
    }
  }
  std::vector<Real> x(n, Real(0.0, kBits));
  for (std::size_t i = n; i-- > 0;) {
    Real s = rhs[i];
    for (std::size_t k = i + 1; k < n; ++k) s -= a[i][k] * x[k];
    x[i] = s / a[i][i];
  }
  return x;
}

inline Real det(std::vector<std::vector<Real>> a) {
  const std::size_t n = a.size();
  Real d(1.0, kBits);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r) {
      if (muntz::abs(a[r][c]) > muntz::abs(a[piv][c])) piv = r;
    }
    if (a[piv][c].is_zero()) return Real(0.0, kBits);
    if (piv != c) {
      std::swap(a[c], a[piv]);
      d = -d;
    }
    d *= a[c][c];
    for (std::size_t r = c + 1; r < n; ++r) {
      const Real f = a[r][c] / a[c][c];
      for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
    }
  }
  return d;
}

/// s-th derivative of t^r at x.
inline Real power_derivative(double r, std::size_t s, const Real& x) {
  Real c(1.0, kBits);
  for (std::size_t i = 0; i < s; ++i) c *= Real(r - static_cast<double>(i), kBits);
  if (c.is_zero()) return c;
  return c * muntz::pow(x, Real(r - static_cast<double>(s), kBits));
}

/// Monomial coefficients c[k][p] of the normalized Bernstein-like basis of
/// span(t^{r_p}) built only from its defining conditions: the k-th function
/// has a zero of order k at a and of order n-k at b, and the functions sum
/// to 1. With a = 0 the zero at 0 is read as "no t^{r_p} with p < k", which
/// gives the Gelfond-Bernstein basis.
inline std::vector<std::vector<Real>> hermite_basis(const std::vector<double>& r, double a, double b) {
  const std::size_t n = r.size() - 1;
  const Real ra(a, kBits), rb(b, kBits);
  std::vector<std::vector<Real>> c;
  for (std::size_t k = 0; k <= n; ++k) {
    // Homogeneous conditions plus c[k][pin] = 1 for a pinned coefficient.
    std::vector<std::vector<Real>> m;
    std::vector<Real> rhs;
    for (std::size_t s = 0; s < k; ++s) {
      std::vector<Real> row(n + 1, Real(0.0, kBits));
      if (a == 0.0) {
        row[s] = Real(1.0, kBits);
      } else {
        for (std::size_t p = 0; p <= n; ++p) row[p] = power_derivative(r[p], s, ra);
      }
      m.push_back(row);
      rhs.push_back(Real(0.0, kBits));
    }
    for (std::size_t s = 0; s < n - k; ++s) {
      std::vector<Real> row(n + 1, Real(0.0, kBits));
      for (std::size_t p = 0; p <= n; ++p) row[p] = power_derivative(r[p], s, rb);
      m.push_back(row);
      rhs.push_back(Real(0.0, kBits));
    }
    std::vector<Real> pin(n + 1, Real(0.0, kBits));
    pin[n] = Real(1.0, kBits);
    if (a == 0.0) {
      m.push_back(pin);
    } else {
      const Real mid((a + b) / 2.0, kBits);
      std::vector<Real> row(n + 1, Real(0.0, kBits));
      for (std::size_t p = 0; p <= n; ++p) row[p] = muntz::pow(mid, Real(r[p], kBits));
      m.push_back(row);
    }
    rhs.push_back(Real(1.0, kBits));
    c.push_back(solve(m, rhs));
  }
  // Scale so that sum_k s_k c[k][p] = delta_{p0}.
  std::vector<std::vector<Real>> m(n + 1, std::vector<Real>(n + 1, Real(0.0, kBits)));
  std::vector<Real> rhs(n + 1, Real(0.0, kBits));
  rhs[0] = Real(1.0, kBits);
  for (std::size_t p = 0; p <= n; ++p) {
    for (std::size_t k = 0; k <= n; ++k) m[p][k] = c[k][p];
  }
  const auto s = solve(m, rhs);
  for (std::size_t k = 0; k <= n; ++k) {
    for (auto& v : c[k]) v *= s[k];
  }
  return c;
}

/// Control points of sum_p coeffs[p] t^{r_p} in the basis above.
inline std::vector<double> hermite_control_points(const std::vector<double>& r, double a, double b,
                                                  const std::vector<double>& coeffs) {
  const auto c = hermite_basis(r, a, b);
  const std::size_t n = r.size() - 1;
  std::vector<std::vector<Real>> m(n + 1, std::vector<Real>(n + 1, Real(0.0, kBits)));
  std::vector<Real> rhs(n + 1);
  for (std::size_t p = 0; p <= n; ++p) {
    for (std::size_t k = 0; k <= n; ++k) m[p][k] = c[k][p];
    rhs[p] = Real(coeffs[p], kBits);
  }
  std::vector<double> out;
  for (const auto& v : solve(m, rhs)) out.push_back(v.to_double());
  return out;
}

/// Value of the k-th Hermite-built basis function at t.
inline double hermite_basis_value(const std::vector<std::vector<Real>>& c, const std::vector<double>& r,
                                  std::size_t k, double t) {
  Real s(0.0, kBits);
  const Real x(t, kBits);
  for (std::size_t p = 0; p < r.size(); ++p) {
    s += c[k][p] * (r[p] == 0.0 ? Real(1.0, kBits) : muntz::pow(x, Real(r[p], kBits)));
  }
  return s.to_double();
}

/// det(u_i^{e_j}) / prod_{i<j} (u_i - u_j) at distinct arguments.
inline Real schur_direct(const std::vector<double>& shifted_exponents, const std::vector<Real>& u) {
  const std::size_t n = u.size();
  std::vector<std::vector<Real>> m(n, std::vector<Real>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) m[i][j] = muntz::pow(u[i], Real(shifted_exponents[j], kBits));
  }
  Real v(1.0, kBits);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) v *= u[i] - u[j];
  }
  return det(m) / v;
}

/// Number of semistandard Young tableaux of an integer shape with entries <= n.
inline long count_ssyt(const std::vector<int>& shape, int n) {
  std::vector<std::pair<int, int>> cells;
  for (std::size_t i = 0; i < shape.size(); ++i) {
    for (int j = 0; j < shape[i]; ++j) cells.emplace_back(static_cast<int>(i), j);
  }
  std::vector<std::vector<int>> t(shape.size());
  for (std::size_t i = 0; i < shape.size(); ++i) t[i].assign(static_cast<std::size_t>(shape[i]), 0);
  long count = 0;
  auto fill = [&](auto& self, std::size_t idx) -> void {
    if (idx == cells.size()) {
      ++count;
      return;
    }
    const auto [i, j] = cells[idx];
    int lo = 1;
    if (j > 0) lo = std::max(lo, t[i][j - 1]);
    if (i > 0) lo = std::max(lo, t[i - 1][j] + 1);
    for (int v = lo; v <= n; ++v) {
      t[i][j] = v;
      self(self, idx + 1);
    }
  };
  fill(fill, 0);
  return count;
}

/// One classical degree elevation step of a polygon of n+1 points.
inline std::vector<std::vector<double>> classical_elevate(const std::vector<std::vector<double>>& p) {
  const std::size_t n = p.size() - 1;
  std::vector<std::vector<double>> q(n + 2, std::vector<double>(p[0].size()));
  q[0] = p[0];
  q[n + 1] = p[n];
  for (std::size_t i = 1; i <= n; ++i) {
    const double w = static_cast<double>(i) / static_cast<double>(n + 1);
    for (std::size_t c = 0; c < p[0].size(); ++c) q[i][c] = w * p[i - 1][c] + (1.0 - w) * p[i][c];
  }
  return q;
}

}  // namespace oracle
