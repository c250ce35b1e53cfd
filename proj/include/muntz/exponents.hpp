#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "muntz/schur.hpp"

namespace muntz {

/// How an exponent sequence continues past its explicit prefix.
enum class ExtensionRule {
  explicit_list,  ///< no extension; only the prefix exists
  affine,         ///< r_i = alpha * i + beta
  power,          ///< r_i = i^p
  reciprocal,     ///< r_i = c - d / i (bounded exponents)
  table,          ///< r_i = table[i - prefix.size()]
};

std::string to_string(ExtensionRule rule);
/// Parses "explicit", "affine", "power", "reciprocal" or "table".
ExtensionRule parse_extension_rule(const std::string& name);

/// Lambda = (r_0 = 0, r_1, r_2, ...): an explicit prefix plus an extension rule.
class ExponentSequence {
 public:
  ExponentSequence(std::vector<double> prefix, ExtensionRule rule, std::vector<double> params = {});

  static ExponentSequence classical();
  static ExponentSequence affine(std::vector<double> prefix, double alpha, double beta);
  static ExponentSequence power(std::vector<double> prefix, double p);
  static ExponentSequence reciprocal(std::vector<double> prefix, double c, double d);
  static ExponentSequence table(std::vector<double> prefix, std::vector<double> tail);

  const std::vector<double>& prefix() const { return prefix_; }
  ExtensionRule rule() const { return rule_; }
  const std::vector<double>& params() const { return params_; }

  /// r_i; throws ValidationError when the rule does not reach index i.
  double at(std::size_t i) const;
  /// (r_0, ..., r_m), checked for r_0 = 0 and strict increase.
  std::vector<double> materialize(std::size_t m) const;

  friend bool operator==(const ExponentSequence&, const ExponentSequence&) = default;

 private:
  std::vector<double> prefix_;
  ExtensionRule rule_;
  std::vector<double> params_;
};

/// [a, b] with 0 <= a < b.
struct Interval {
  double a = 0.0;
  double b = 1.0;

  /// Throws ValidationError unless 0 <= a < b and both are finite.
  void validate() const;
  double width() const { return b - a; }

  friend bool operator==(const Interval&, const Interval&) = default;
};

/// lambda_k = r_n - r_{k-1} - (n - k + 1), k = 1..n+1.
RealPartition partition_from_exponents(const std::vector<double>& exponents);

/// (lambda_2, ..., lambda_{n+1}).
RealPartition bottom_partition(const RealPartition& lambda);

/// Partial sums only. Their growth says nothing conclusive about divergence.
struct MuntzPartialSums {
  double sum_reciprocal = 0.0;  ///< sum_{i=1}^m 1 / r_i
  double sum_density = 0.0;     ///< sum_{k=1}^m r_k / (r_k^2 + 1)
  double sum_full = 0.0;        ///< sum over nonzero r_k, k <= m, of 1 / |r_k|
};

MuntzPartialSums muntz_partial_sums(const ExponentSequence& seq, std::size_t m);

/// Throws MonotonicityError unless r_0 = 0, all r_i >= 0 and strictly increasing.
void validate_exponents(const std::vector<double>& exponents);

}  // namespace muntz
