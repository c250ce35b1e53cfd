#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "muntz/real.hpp"

namespace muntz {

/// Working precision and the two tolerances every check in the library uses.
struct PrecisionContext {
  /// Significand width of the binary256 format; the floor for "extended" runs.
  static constexpr unsigned kExtendedBits = 237;

  unsigned significand_bits = 64;
  double residual_tolerance = 1e-10;
  double comparison_tolerance = 1e-12;

  /// Throws ValidationError unless bits >= 24 and residual >= comparison >= 0.
  void validate() const;

  PrecisionContext with_bits(unsigned bits) const;
  PrecisionContext extended() const;

  /// Default context, with the width overridden by MUNTZ_PRECISION_BITS when set.
  static PrecisionContext from_environment();
};

/// Strictly increasing interpolation nodes x_0 < x_1 < ... < x_n.
class NodeSet {
 public:
  explicit NodeSet(std::vector<double> nodes);

  std::size_t size() const { return nodes_.size(); }
  double operator[](std::size_t i) const { return nodes_[i]; }
  const std::vector<double>& values() const { return nodes_; }

 private:
  std::vector<double> nodes_;
};

/// f_t(x) = t^x, with the hard branch f_0(0) = 1, f_0(x) = 0 for x > 0.
Real eval_ft(const Real& t, double x);
double eval_ft(double t, double x);

/// [x_0, ..., x_n] f by the two-term recursion, carried out at ctx precision.
Real divided_difference(const NodeSet& nodes, std::span<const Real> values,
                        const PrecisionContext& ctx);

/// All trailing divided differences [x_k, ..., x_n] f for k = 0..n, taken from
/// one triangular tableau. Computed at the width of `values`.
std::vector<Real> trailing_divided_differences(const NodeSet& nodes, std::span<const Real> values);

/// f_t sampled on the nodes at the given width.
std::vector<Real> ft_values(const Real& t, const NodeSet& nodes);

/// log2 of sum_p 1 / prod_{l != p} |x_p - x_l|: how strongly rounding errors
/// in the samples can be amplified by [x_0..x_n].
double log2_divided_difference_weight(std::span<const double> nodes);

}  // namespace muntz
