#include "muntz/schur.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "muntz/errors.hpp"

namespace muntz {

RealPartition::RealPartition(std::vector<double> parts) : parts_(std::move(parts)) {
  const std::size_t n = parts_.size();
  if (n == 0) throw ValidationError("a real partition needs at least one part");
  for (std::size_t j = 0; j < n; ++j) {
    if (!std::isfinite(parts_[j])) throw ValidationError("partition part is not finite");
    // lambda_{j+1} - j > lambda_{j+2} - (j+1), 0-based here.
    if (j + 1 < n && !(parts_[j] - static_cast<double>(j) > parts_[j + 1] - static_cast<double>(j + 1))) {
      throw ValidationError("real partition chain fails between parts " + std::to_string(j + 1) +
                            " and " + std::to_string(j + 2));
    }
  }
  if (!(parts_[n - 1] - static_cast<double>(n - 1) > -static_cast<double>(n))) {
    throw ValidationError("real partition: last part must exceed -1");
  }
}

double RealPartition::weight() const {
  double w = 0.0;
  for (double p : parts_) w += p;
  return w;
}

std::vector<double> RealPartition::shifted_exponents() const {
  const std::size_t n = parts_.size();
  std::vector<double> e(n);
  for (std::size_t j = 0; j < n; ++j) e[j] = parts_[j] + static_cast<double>(n - 1 - j);
  return e;
}

RealPartition RealPartition::slice(std::size_t first, std::size_t count) const {
  if (first + count > parts_.size()) throw ValidationError("partition slice out of range");
  return RealPartition(std::vector<double>(parts_.begin() + static_cast<std::ptrdiff_t>(first),
                                           parts_.begin() + static_cast<std::ptrdiff_t>(first + count)));
}

ArgumentMultiset::ArgumentMultiset(std::vector<SchurArgument> entries) : entries_(std::move(entries)) {
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (entries_[i].multiplicity == 0) throw ValidationError("argument multiplicity must be positive");
    if (entries_[i].value.sign() <= 0) {
      throw DomainError("Schur arguments must be strictly positive (real exponents)");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (entries_[i].value == entries_[j].value) {
        throw ValidationError("argument values must be pairwise distinct; merge multiplicities");
      }
    }
  }
}

ArgumentMultiset::ArgumentMultiset(std::initializer_list<std::pair<double, std::size_t>> entries)
    : ArgumentMultiset([&] {
        std::vector<SchurArgument> v;
        for (const auto& [value, mult] : entries) v.push_back({Real(value), mult});
        return v;
      }()) {}

ArgumentMultiset ArgumentMultiset::distinct(std::span<const double> values) {
  std::vector<SchurArgument> v;
  for (double x : values) v.push_back({Real(x), 1});
  return ArgumentMultiset(std::move(v));
}

std::size_t ArgumentMultiset::total() const {
  std::size_t t = 0;
  for (const auto& e : entries_) t += e.multiplicity;
  return t;
}

ArgumentMultiset ArgumentMultiset::scaled(const Real& c) const {
  std::vector<SchurArgument> v;
  for (const auto& e : entries_) v.push_back({e.value * c, e.multiplicity});
  return ArgumentMultiset(std::move(v));
}

ArgumentMultiset ArgumentMultiset::concatenated(const ArgumentMultiset& other) const {
  std::vector<SchurArgument> v = entries_;
  v.insert(v.end(), other.entries_.begin(), other.entries_.end());
  return ArgumentMultiset(std::move(v));
}

namespace detail {

std::vector<Real> confluent_row(std::span<const double> exponents, const Real& u, std::size_t order) {
  std::vector<Real> row;
  row.reserve(exponents.size());
  for (double e : exponents) {
    // C(e, s) = e (e-1) ... (e-s+1) / s!, exact for real e.
    Real coeff(1.0);
    bool vanished = false;
    for (std::size_t i = 0; i < order; ++i) {
      const double factor = e - static_cast<double>(i);
      if (factor == 0.0) {
        vanished = true;
        break;
      }
      coeff *= Real(factor);
      coeff /= Real(static_cast<double>(i + 1));
    }
    if (vanished) {
      row.emplace_back(0.0);
      continue;
    }
    const double power = e - static_cast<double>(order);
    if (power != 0.0) coeff *= pow(u, Real(power));
    row.push_back(std::move(coeff));
  }
  return row;
}

RealMatrix confluent_rows(std::span<const double> exponents, const ArgumentMultiset& args) {
  const std::size_t n = exponents.size();
  if (args.total() != n) throw ValidationError("argument count must equal the partition length");
  RealMatrix m(n, n);
  std::size_t r = 0;
  for (const auto& arg : args.entries()) {
    // C(e, s) u^{e-s} = C(e, s-1) u^{e-s+1} * (e - s + 1) / (s u).
    std::vector<Real> row = confluent_row(exponents, arg.value, 0);
    const Real inv_u = Real(1.0, arg.value.bits()) / arg.value;
    for (std::size_t s = 0; s < arg.multiplicity; ++s, ++r) {
      if (s > 0) {
        const Real step = inv_u / Real(static_cast<double>(s), arg.value.bits());
        for (std::size_t j = 0; j < n; ++j) {
          const double factor = exponents[j] - static_cast<double>(s - 1);
          if (row[j].is_zero()) continue;
          if (factor == 0.0) {
            row[j] = Real(0.0, row[j].bits());
            continue;
          }
          row[j] *= step;
          row[j] *= Real(factor, row[j].bits());
        }
      }
      for (std::size_t j = 0; j < n; ++j) m(r, j) = row[j];
    }
  }
  return m;
}

Real confluent_vandermonde(const ArgumentMultiset& args) {
  Real det(1.0);
  const auto& entries = args.entries();
  for (std::size_t a = 0; a < entries.size(); ++a) {
    const std::size_t ma = entries[a].multiplicity;
    if ((ma * (ma - 1) / 2) % 2 == 1) det = -det;
    for (std::size_t b = a + 1; b < entries.size(); ++b) {
      const Real diff = entries[a].value - entries[b].value;
      det *= pow(diff, static_cast<long>(ma * entries[b].multiplicity));
    }
  }
  return det;
}

}  // namespace detail

unsigned schur_working_bits(std::size_t n, const PrecisionContext& ctx) {
  if (n <= 32) return ctx.significand_bits;
  return std::max({ctx.significand_bits, PrecisionContext::kExtendedBits,
                   static_cast<unsigned>(16 * n)});
}

SchurValue schur_eval(const RealPartition& lambda, const ArgumentMultiset& args,
                      const PrecisionContext& ctx) {
  ctx.validate();
  const std::size_t n = lambda.size();
  if (args.total() != n) {
    throw ValidationError("Schur evaluation: " + std::to_string(args.total()) +
                          " arguments for a partition of length " + std::to_string(n));
  }
  const unsigned bits = schur_working_bits(n, ctx);
  PrecisionScope scope(bits);

  std::vector<SchurArgument> widened;
  for (const auto& e : args.entries()) {
    Real v = e.value;
    v.set_bits(bits);
    widened.push_back({std::move(v), e.multiplicity});
  }
  const ArgumentMultiset wargs(std::move(widened));
  const auto exponents = lambda.shifted_exponents();
  Real numerator = determinant(detail::confluent_rows(exponents, wargs));
  Real value = numerator / detail::confluent_vandermonde(wargs);
  return {std::move(value), bits, bits > ctx.significand_bits};
}

Real schur_all_ones(const RealPartition& lambda, const PrecisionContext& ctx) {
  const std::size_t n = lambda.size();
  PrecisionScope scope(std::max(ctx.significand_bits, 64u));
  Real num(1.0);
  Real den(1.0);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = j + 1; k < n; ++k) {
      num *= Real(lambda[j] - lambda[k] + static_cast<double>(k - j));
    }
    // (j)! for 0-based j, i.e. (j-1)! in 1-based indexing.
    for (std::size_t f = 2; f <= j; ++f) den *= Real(static_cast<double>(f));
  }
  return num / den;
}

Real splitting_residual(const RealPartition& eta, std::size_t split, const ArgumentMultiset& z_args,
                        const ArgumentMultiset& y_args, double epsilon,
                        const PrecisionContext& ctx) {
  if (!(epsilon > 0.0)) throw DomainError("splitting residual needs epsilon > 0");
  if (split > eta.size()) throw ValidationError("split index exceeds the partition length");
  if (z_args.total() != split || y_args.total() != eta.size() - split) {
    throw ValidationError("argument counts must match the two halves of the split");
  }
  if (split == eta.size()) return Real(0.0, ctx.significand_bits);
  const RealPartition mu = eta.slice(split, eta.size() - split);
  if (split == 0) {
    // S_eta(eps y) / eps^{|eta|} = S_eta(y) by homogeneity; compare directly.
    const Real eps = Real(epsilon, schur_working_bits(eta.size(), ctx));
    const Real lhs = schur_eval(eta, y_args.scaled(eps), ctx).value / pow(eps, Real(mu.weight()));
    return abs(lhs - schur_eval(mu, y_args, ctx).value);
  }
  const RealPartition lambda = eta.slice(0, split);
  const unsigned bits = schur_working_bits(eta.size(), ctx);
  PrecisionScope scope(bits);
  const Real eps(epsilon, bits);
  const ArgumentMultiset joined = z_args.concatenated(y_args.scaled(eps));
  const Real lhs = schur_eval(eta, joined, ctx).value / pow(eps, Real(mu.weight()));
  const Real rhs = schur_eval(lambda, z_args, ctx).value * schur_eval(mu, y_args, ctx).value;
  return abs(lhs - rhs);
}

}  // namespace muntz
