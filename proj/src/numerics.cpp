#include "muntz/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <string>

#include "muntz/errors.hpp"

namespace muntz {

void PrecisionContext::validate() const {
  if (significand_bits < 24) {
    throw ValidationError("significand_bits must be at least 24, got " +
                          std::to_string(significand_bits));
  }
  if (!(comparison_tolerance >= 0.0) || !(residual_tolerance >= comparison_tolerance)) {
    throw ValidationError("tolerances must satisfy residual >= comparison >= 0");
  }
}

PrecisionContext PrecisionContext::with_bits(unsigned bits) const {
  PrecisionContext out = *this;
  out.significand_bits = bits;
  return out;
}

PrecisionContext PrecisionContext::extended() const {
  return with_bits(std::max(significand_bits, kExtendedBits));
}

PrecisionContext PrecisionContext::from_environment() {
  PrecisionContext ctx;
  if (const char* env = std::getenv("MUNTZ_PRECISION_BITS"); env != nullptr && *env != '\0') {
    char* end = nullptr;
    const unsigned long bits = std::strtoul(env, &end, 10);
    if (end == env || *end != '\0') {
      throw ValidationError(std::string("MUNTZ_PRECISION_BITS is not an integer: ") + env);
    }
    ctx.significand_bits = static_cast<unsigned>(bits);
  }
  ctx.validate();
  return ctx;
}

NodeSet::NodeSet(std::vector<double> nodes) : nodes_(std::move(nodes)) {
  if (nodes_.empty()) throw DomainError("node set is empty");
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (!std::isfinite(nodes_[i])) throw DomainError("node " + std::to_string(i) + " is not finite");
    if (i > 0 && nodes_[i] == nodes_[i - 1]) {
      throw DomainError("duplicated node at index " + std::to_string(i) +
                        " (confluent divided differences are not supported)");
    }
    if (i > 0 && nodes_[i] < nodes_[i - 1]) {
      throw DomainError("nodes must be strictly increasing (index " + std::to_string(i) + ")");
    }
  }
}

Real eval_ft(const Real& t, double x) {
  if (t.sign() < 0 || x < 0.0) throw DomainError("f_t(x) requires t >= 0 and x >= 0");
  if (t.is_zero()) return Real(x == 0.0 ? 1.0 : 0.0, t.bits());
  return pow(t, Real(x, t.bits()));
}

double eval_ft(double t, double x) {
  if (t < 0.0 || x < 0.0) throw DomainError("f_t(x) requires t >= 0 and x >= 0");
  if (t == 0.0) return x == 0.0 ? 1.0 : 0.0;
  return std::pow(t, x);
}

std::vector<Real> trailing_divided_differences(const NodeSet& nodes, std::span<const Real> values) {
  const std::size_t count = nodes.size();
  if (values.size() != count) throw DomainError("values and nodes differ in length");
  const std::size_t n = count - 1;
  std::vector<Real> column(values.begin(), values.end());
  std::vector<Real> tails(count);
  tails[n] = column[n];
  // After level l, column[i] holds [x_i, ..., x_{i+l}] f.
  for (std::size_t level = 1; level <= n; ++level) {
    for (std::size_t i = 0; i + level <= n; ++i) {
      column[i] = column[i + 1] - column[i];
      column[i] /= Real(nodes[i + level] - nodes[i], column[i].bits());
    }
    tails[n - level] = column[n - level];
  }
  return tails;
}

Real divided_difference(const NodeSet& nodes, std::span<const Real> values,
                        const PrecisionContext& ctx) {
  ctx.validate();
  std::vector<Real> widened;
  widened.reserve(values.size());
  for (const Real& v : values) {
    Real w = v;
    w.set_bits(ctx.significand_bits);
    widened.push_back(std::move(w));
  }
  PrecisionScope scope(ctx.significand_bits);
  return trailing_divided_differences(nodes, widened).front();
}

std::vector<Real> ft_values(const Real& t, const NodeSet& nodes) {
  std::vector<Real> out;
  out.reserve(nodes.size());
  for (double x : nodes.values()) out.push_back(eval_ft(t, x));
  return out;
}

double log2_divided_difference_weight(std::span<const double> nodes) {
  double best = -std::numeric_limits<double>::infinity();
  std::vector<double> logs;
  logs.reserve(nodes.size());
  for (std::size_t p = 0; p < nodes.size(); ++p) {
    double s = 0.0;
    for (std::size_t l = 0; l < nodes.size(); ++l) {
      if (l != p) s -= std::log2(std::abs(nodes[p] - nodes[l]));
    }
    logs.push_back(s);
    best = std::max(best, s);
  }
  double acc = 0.0;
  for (double s : logs) acc += std::exp2(s - best);
  return best + std::log2(acc);
}

}  // namespace muntz
