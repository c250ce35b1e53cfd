#include "muntz/exponents.hpp"

#include <cmath>

#include "muntz/errors.hpp"

namespace muntz {

std::string to_string(ExtensionRule rule) {
  switch (rule) {
    case ExtensionRule::explicit_list: return "explicit";
    case ExtensionRule::affine: return "affine";
    case ExtensionRule::power: return "power";
    case ExtensionRule::reciprocal: return "reciprocal";
    case ExtensionRule::table: return "table";
  }
  return "explicit";
}

ExtensionRule parse_extension_rule(const std::string& name) {
  if (name == "explicit") return ExtensionRule::explicit_list;
  if (name == "affine") return ExtensionRule::affine;
  if (name == "power") return ExtensionRule::power;
  if (name == "reciprocal") return ExtensionRule::reciprocal;
  if (name == "table") return ExtensionRule::table;
  throw ValidationError("unknown extension rule '" + name + "'");
}

ExponentSequence::ExponentSequence(std::vector<double> prefix, ExtensionRule rule,
                                   std::vector<double> params)
    : prefix_(std::move(prefix)), rule_(rule), params_(std::move(params)) {
  if (prefix_.empty()) throw ValidationError("exponent prefix must contain r_0 = 0");
  std::size_t wanted = 0;
  switch (rule_) {
    case ExtensionRule::explicit_list: wanted = 0; break;
    case ExtensionRule::affine: wanted = 2; break;
    case ExtensionRule::power: wanted = 1; break;
    case ExtensionRule::reciprocal: wanted = 2; break;
    case ExtensionRule::table: wanted = params_.size(); break;
  }
  if (params_.size() != wanted) {
    throw ValidationError("rule '" + to_string(rule_) + "' takes " + std::to_string(wanted) +
                          " parameters, got " + std::to_string(params_.size()));
  }
  for (double p : params_) {
    if (!std::isfinite(p)) throw ValidationError("rule parameters must be finite");
  }
  validate_exponents(prefix_);
}

ExponentSequence ExponentSequence::classical() {
  return ExponentSequence({0.0}, ExtensionRule::affine, {1.0, 0.0});
}

ExponentSequence ExponentSequence::affine(std::vector<double> prefix, double alpha, double beta) {
  return ExponentSequence(std::move(prefix), ExtensionRule::affine, {alpha, beta});
}

ExponentSequence ExponentSequence::power(std::vector<double> prefix, double p) {
  return ExponentSequence(std::move(prefix), ExtensionRule::power, {p});
}

ExponentSequence ExponentSequence::reciprocal(std::vector<double> prefix, double c, double d) {
  return ExponentSequence(std::move(prefix), ExtensionRule::reciprocal, {c, d});
}

ExponentSequence ExponentSequence::table(std::vector<double> prefix, std::vector<double> tail) {
  return ExponentSequence(std::move(prefix), ExtensionRule::table, std::move(tail));
}

double ExponentSequence::at(std::size_t i) const {
  if (i < prefix_.size()) return prefix_[i];
  const double x = static_cast<double>(i);
  switch (rule_) {
    case ExtensionRule::explicit_list:
      throw ValidationError("explicit exponent list ends at index " +
                            std::to_string(prefix_.size() - 1) + "; r_" + std::to_string(i) +
                            " requested");
    case ExtensionRule::affine: return params_[0] * x + params_[1];
    case ExtensionRule::power: return std::pow(x, params_[0]);
    case ExtensionRule::reciprocal: return params_[0] - params_[1] / x;
    case ExtensionRule::table: {
      const std::size_t j = i - prefix_.size();
      if (j >= params_.size()) {
        throw ValidationError("exponent table ends at index " +
                              std::to_string(prefix_.size() + params_.size() - 1) + "; r_" +
                              std::to_string(i) + " requested");
      }
      return params_[j];
    }
  }
  return 0.0;
}

std::vector<double> ExponentSequence::materialize(std::size_t m) const {
  std::vector<double> out(m + 1);
  for (std::size_t i = 0; i <= m; ++i) out[i] = at(i);
  validate_exponents(out);
  return out;
}

void Interval::validate() const {
  if (!std::isfinite(a) || !std::isfinite(b)) throw ValidationError("interval ends must be finite");
  if (a < 0.0) throw ValidationError("interval start a must be >= 0, got " + std::to_string(a));
  if (!(a < b)) {
    throw ValidationError("interval needs a < b, got [" + std::to_string(a) + ", " + std::to_string(b) + "]");
  }
}

void validate_exponents(const std::vector<double>& r) {
  if (r.empty()) throw ValidationError("exponent list is empty");
  if (r[0] != 0.0) throw MonotonicityError(0, "r_0 must be 0");
  for (std::size_t i = 0; i + 1 < r.size(); ++i) {
    if (!std::isfinite(r[i + 1])) throw MonotonicityError(i + 1, "r_" + std::to_string(i + 1) + " is not finite");
    if (!(r[i] < r[i + 1])) {
      throw MonotonicityError(i, "exponents must be strictly increasing: r_" + std::to_string(i) +
                                     " = " + std::to_string(r[i]) + " >= r_" +
                                     std::to_string(i + 1) + " = " + std::to_string(r[i + 1]));
    }
  }
}

RealPartition partition_from_exponents(const std::vector<double>& r) {
  validate_exponents(r);
  const std::size_t n = r.size() - 1;
  std::vector<double> parts(n + 1);
  for (std::size_t k = 1; k <= n + 1; ++k) {
    parts[k - 1] = r[n] - r[k - 1] - static_cast<double>(n - k + 1);
  }
  return RealPartition(std::move(parts));
}

RealPartition bottom_partition(const RealPartition& lambda) {
  if (lambda.size() < 2) throw ValidationError("bottom partition needs at least two parts");
  return lambda.slice(1, lambda.size() - 1);
}

MuntzPartialSums muntz_partial_sums(const ExponentSequence& seq, std::size_t m) {
  if (m == 0) throw ValidationError("partial sums need m >= 1");
  const auto r = seq.materialize(m);
  MuntzPartialSums s;
  for (std::size_t i = 1; i <= m; ++i) {
    if (r[i] == 0.0) throw ValidationError("r_" + std::to_string(i) + " = 0 in a partial sum");
    s.sum_reciprocal += 1.0 / r[i];
    s.sum_density += r[i] / (r[i] * r[i] + 1.0);
    s.sum_full += 1.0 / std::abs(r[i]);
  }
  return s;
}

}  // namespace muntz
