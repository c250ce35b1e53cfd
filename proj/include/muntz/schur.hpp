#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <utility>
#include <vector>

#include "muntz/linalg.hpp"
#include "muntz/numerics.hpp"
#include "muntz/real.hpp"

namespace muntz {

/// A real sequence with lambda_1 > lambda_2 - 1 > ... > lambda_n - (n-1) > -n.
class RealPartition {
 public:
  /// Throws ValidationError when the chain fails.
  explicit RealPartition(std::vector<double> parts);

  std::size_t size() const { return parts_.size(); }
  double operator[](std::size_t i) const { return parts_[i]; }
  const std::vector<double>& parts() const { return parts_; }
  /// |lambda| = sum of the parts.
  double weight() const;
  /// Exponents lambda_j + n - j (j = 1..n) of the numerator determinant.
  std::vector<double> shifted_exponents() const;

  /// Parts [first, first + count) as a partition of their own.
  RealPartition slice(std::size_t first, std::size_t count) const;

  friend bool operator==(const RealPartition&, const RealPartition&) = default;

 private:
  std::vector<double> parts_;
};

/// One distinct argument with its multiplicity.
struct SchurArgument {
  Real value;
  std::size_t multiplicity = 1;
};

/// Distinct positive arguments with multiplicities, in a fixed order.
class ArgumentMultiset {
 public:
  ArgumentMultiset() = default;
  explicit ArgumentMultiset(std::vector<SchurArgument> entries);
  ArgumentMultiset(std::initializer_list<std::pair<double, std::size_t>> entries);
  /// Each value once.
  static ArgumentMultiset distinct(std::span<const double> values);

  std::size_t total() const;
  const std::vector<SchurArgument>& entries() const { return entries_; }
  /// Every value multiplied by c > 0.
  ArgumentMultiset scaled(const Real& c) const;
  /// The entries of `other` appended after these (values must stay distinct).
  ArgumentMultiset concatenated(const ArgumentMultiset& other) const;

 private:
  std::vector<SchurArgument> entries_;
};

struct SchurValue {
  Real value;
  unsigned working_bits = 0;
  /// Set when the evaluation ran wider than requested because n > 32.
  bool escalated = false;
};

/// Width used for Schur evaluations of length n: ctx width, raised to an
/// extended width for n > 32.
unsigned schur_working_bits(std::size_t n, const PrecisionContext& ctx);

/// S_lambda at the given arguments. Repeated arguments use scaled derivative
/// rows (d^s/du^s u^e) / s! in the numerator and the matching confluent
/// Vandermonde determinant in the denominator.
SchurValue schur_eval(const RealPartition& lambda, const ArgumentMultiset& args,
                      const PrecisionContext& ctx);

/// S_lambda(1^n) from the product formula.
Real schur_all_ones(const RealPartition& lambda, const PrecisionContext& ctx = {});

/// |S_eta(z, eps*y) / eps^{|mu|} - S_lambda(z) S_mu(y)| with eta = (lambda | mu)
/// split after the first `split` parts.
Real splitting_residual(const RealPartition& eta, std::size_t split, const ArgumentMultiset& z_args,
                        const ArgumentMultiset& y_args, double epsilon,
                        const PrecisionContext& ctx);

namespace detail {

/// Rows of the confluent matrix for exponents e_j: for each argument u of
/// multiplicity m, rows s = 0..m-1 with entries C(e_j, s) u^{e_j - s}.
RealMatrix confluent_rows(std::span<const double> exponents, const ArgumentMultiset& args);

/// One confluent row: C(e_j, order) u^{e_j - order} for every exponent.
std::vector<Real> confluent_row(std::span<const double> exponents, const Real& u,
                                std::size_t order);

/// Closed form of the confluent Vandermonde determinant for exponents
/// (n-1, ..., 1, 0) with rows laid out as in confluent_rows.
Real confluent_vandermonde(const ArgumentMultiset& args);

}  // namespace detail

}  // namespace muntz
