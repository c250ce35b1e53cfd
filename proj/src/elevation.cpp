#include "muntz/elevation.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "muntz/errors.hpp"

namespace muntz {

namespace {

// Weights only ever meet binary64 polygons, so agreement well below one ulp
// of a number in [0,1] is enough.
constexpr double kShadowAgreement = 1e-18;

double first_leg(const std::vector<Point>& pts) {
  if (pts.size() < 2) return 0.0;
  double d = 0.0;
  for (std::size_t c = 0; c < pts[0].size(); ++c) d = std::max(d, std::abs(pts[0][c] - pts[1][c]));
  return d;
}

std::vector<double> lift_greville(const std::vector<double>& exponents) {
  if (exponents.size() < 2) return {};
  const MuntzElement t_r1 = MuntzElement::scalar({exponents[1]}, {1.0});
  const auto poly = control_points(t_r1, exponents, BasisKind::gelfond(), PrecisionContext{});
  std::vector<double> out;
  for (const auto& p : poly.points) out.push_back(p[0]);
  return out;
}

}  // namespace

const ControlPolygon* ElevationTrace::polygon_at(std::size_t j) const {
  const auto it = std::lower_bound(stored_iterations.begin(), stored_iterations.end(), j);
  if (it == stored_iterations.end() || *it != j) return nullptr;
  return &polygons[static_cast<std::size_t>(it - stored_iterations.begin())];
}

bool stores_iteration(std::size_t j, std::size_t iterations) {
  return iterations <= 256 || j % 8 == 0 || j == iterations;
}

std::vector<Point> apply_corner_cut(const std::vector<Point>& points, const std::vector<double>& xi) {
  const std::size_t m = points.size() - 1;
  if (xi.size() != m) throw ValidationError("corner cut needs one weight per interior point");
  std::vector<Point> out;
  out.reserve(m + 2);
  out.push_back(points.front());
  for (std::size_t i = 1; i <= m; ++i) {
    Point p(points[i].size());
    const double w = xi[i - 1];
    for (std::size_t c = 0; c < p.size(); ++c) p[c] = (1.0 - w) * points[i - 1][c] + w * points[i][c];
    out.push_back(std::move(p));
  }
  out.push_back(points.back());
  return out;
}

CornerCutRecovery recover_corner_cut(const std::vector<Point>& before, const std::vector<Point>& after) {
  if (after.size() != before.size() + 1) throw ValidationError("elevated polygon must have one more point");
  CornerCutRecovery out;
  for (std::size_t i = 1; i + 1 < after.size(); ++i) {
    const Point& p = before[i - 1];
    const Point& q = before[i];
    double dd = 0.0;
    double proj = 0.0;
    for (std::size_t c = 0; c < p.size(); ++c) {
      dd += (q[c] - p[c]) * (q[c] - p[c]);
      proj += (after[i][c] - p[c]) * (q[c] - p[c]);
    }
    // A degenerate segment admits every weight; report the midpoint.
    const double w = dd > 0.0 ? proj / dd : 0.5;
    double off = 0.0;
    for (std::size_t c = 0; c < p.size(); ++c) {
      off = std::max(off, std::abs(p[c] + w * (q[c] - p[c]) - after[i][c]));
    }
    out.xi.push_back(w);
    out.max_residual = std::max(out.max_residual, off);
  }
  return out;
}

ControlPolygon elevate_gelfond_step(const ControlPolygon& polygon, double next_exponent) {
  polygon.validate();
  if (polygon.basis.tag != BasisKind::Tag::gelfond) {
    throw DomainError("the explicit scheme applies to Gelfond-Bernstein polygons over [0, 1]");
  }
  const std::size_t m = polygon.size() - 1;
  if (!(next_exponent > polygon.exponents.back())) {
    throw MonotonicityError(m, "next exponent must exceed r_" + std::to_string(m));
  }
  ControlPolygon out{{}, polygon.exponents, polygon.basis};
  out.exponents.push_back(next_exponent);
  out.points.push_back(polygon.points.front());
  for (std::size_t i = 1; i <= m; ++i) {
    const double lam = polygon.exponents[i] / next_exponent;
    Point p(polygon.points[i].size());
    for (std::size_t c = 0; c < p.size(); ++c) {
      p[c] = lam * polygon.points[i - 1][c] + (1.0 - lam) * polygon.points[i][c];
    }
    out.points.push_back(std::move(p));
  }
  out.points.push_back(polygon.points.back());
  return out;
}

IntervalElevator::IntervalElevator(const std::vector<double>& exponents, double a,
                                   std::size_t expected_degree, const PrecisionContext& ctx)
    : a_(a), ctx_(ctx) {
  validate_exponents(exponents);
  primary_.emplace(a_, 64);
  for (std::size_t i = 1; i < exponents.size(); ++i) primary_->advance(exponents[i]);
  rebuild(dual_functional_bits(std::max(expected_degree, exponents.size() - 1), ctx_));
}

void IntervalElevator::rebuild(unsigned bits) {
  const std::vector<double> r = primary_->exponents();
  primary_.emplace(a_, bits);
  shadow_.emplace(a_, bits + 64);
  for (std::size_t i = 1; i < r.size(); ++i) {
    primary_->advance(r[i]);
    shadow_->advance(r[i]);
  }
}

std::vector<Real> IntervalElevator::checked(const std::vector<Real>& xi,
                                            const std::vector<Real>& shadow) const {
  const double tol = ctx_.comparison_tolerance;
  for (std::size_t i = 0; i < xi.size(); ++i) {
    const double w = xi[i].to_double();
    if (!(w >= -tol && w <= 1.0 + tol)) return {};
    if (!(std::abs((xi[i] - shadow[i]).to_double()) <= kShadowAgreement)) return {};
  }
  return xi;
}

ElevationStep IntervalElevator::advance(double next_exponent) {
  const std::size_t m = degree();
  auto xi = checked(primary_->advance(next_exponent), shadow_->advance(next_exponent));
  if (xi.empty() && m > 0) {
    ++escalations_;
    const unsigned wider = primary_->bits() * 4;
    // Drop the failed step and replay the space at the wider width.
    std::vector<double> r = primary_->exponents();
    r.pop_back();
    primary_.emplace(a_, 64);
    for (std::size_t i = 1; i < r.size(); ++i) primary_->advance(r[i]);
    rebuild(wider);
    xi = checked(primary_->advance(next_exponent), shadow_->advance(next_exponent));
    if (xi.empty()) {
      throw NumericalFailure("corner-cutting weights out of range or unstable at " + std::to_string(wider) +
                             " bits (dimension " + std::to_string(m + 2) + ")");
    }
  }
  ElevationStep step;
  step.source_dim = m;
  for (const Real& w : xi) step.xi.push_back(w.to_double());
  return step;
}

std::vector<double> IntervalElevator::monomial_control_points(std::size_t p) const {
  std::vector<double> out;
  for (const Real& v : primary_->monomial_control_points(p)) out.push_back(v.to_double());
  return out;
}

std::pair<ControlPolygon, ElevationStep> elevate_interval_step(const ControlPolygon& polygon,
                                                               double next_exponent,
                                                               const PrecisionContext& ctx) {
  polygon.validate();
  if (polygon.basis.tag != BasisKind::Tag::chebyshev) {
    throw DomainError("interval elevation needs a Chebyshev-Bernstein polygon over [a, b], a > 0");
  }
  const Interval iv = polygon.basis.interval;
  IntervalElevator elev(polygon.exponents, iv.a / iv.b, polygon.size(), ctx);
  ElevationStep step = elev.advance(next_exponent);
  ControlPolygon out{apply_corner_cut(polygon.points, step.xi), polygon.exponents, polygon.basis};
  out.exponents.push_back(next_exponent);
  return {std::move(out), std::move(step)};
}

Matrix<double> restriction_matrix(const std::vector<double>& exponents, double a,
                                  const PrecisionContext& ctx) {
  validate_exponents(exponents);
  if (!(a > 0.0 && a < 1.0)) throw DomainError("restriction matrix needs 0 < a < 1");
  const std::size_t n = exponents.size() - 1;
  const GelfondBernsteinBasis gb(exponents);
  auto compute = [&](unsigned bits) {
    ChebyshevDualFunctionals eta(a, bits);
    for (std::size_t i = 1; i <= n; ++i) eta.advance(exponents[i]);
    const RealMatrix nmat = eta.monomial_matrix();
    const RealMatrix hmat = gb.monomial_coefficients(bits);
    PrecisionScope scope(bits);
    RealMatrix s(n + 1, n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
      for (std::size_t j = 0; j <= n; ++j) {
        Real acc(0.0, bits);
        for (std::size_t p = j; p <= n; ++p) acc.add_product(nmat(i, p), hmat(j, p));
        s(i, j) = std::move(acc);
      }
    }
    return s;
  };
  auto acceptable = [&](const RealMatrix& s, const RealMatrix& shadow) {
    const double tol = ctx.comparison_tolerance;
    for (std::size_t i = 0; i <= n; ++i) {
      for (std::size_t j = 0; j <= n; ++j) {
        const double v = s(i, j).to_double();
        if (!(v >= -tol && v <= 1.0 + tol)) return false;
        if (!(std::abs((s(i, j) - shadow(i, j)).to_double()) <= kShadowAgreement)) return false;
      }
    }
    return true;
  };
  unsigned bits = dual_functional_bits(n, ctx) + (gb.working_bits(ctx) - ctx.significand_bits);
  for (int attempt = 0; attempt < 2; ++attempt, bits *= 4) {
    const RealMatrix s = compute(bits);
    if (!acceptable(s, compute(bits + 64))) continue;
    Matrix<double> out(n + 1, n + 1);
    for (std::size_t i = 0; i <= n; ++i)
      for (std::size_t j = 0; j <= n; ++j) out(i, j) = s(i, j).to_double();
    return out;
  }
  throw NumericalFailure("restriction matrix entries unstable or outside [0, 1] at " +
                         std::to_string(bits / 4) + " bits");
}

namespace {

std::size_t prefix_degree(const std::vector<double>& exponents, const ExponentSequence& seq) {
  // Shortest prefix of seq that contains every exponent.
  const double top = exponents.back();
  std::size_t n = 0;
  while (seq.at(n) < top) ++n;
  if (seq.at(n) != top) {
    throw ValidationError("exponent " + std::to_string(top) + " does not occur in the sequence");
  }
  const auto prefix = seq.materialize(n);
  for (double r : exponents) {
    if (!std::binary_search(prefix.begin(), prefix.end(), r)) {
      throw ValidationError("exponent " + std::to_string(r) + " does not occur in the sequence");
    }
  }
  return n;
}

double curve_scale(const MuntzElement& curve, const std::vector<double>& ts) {
  double s = 0.0;
  for (double t : ts)
    for (double v : curve.value(t)) s = std::max(s, std::abs(v));
  return s;
}

}  // namespace

ElevationTrace run_elevation(const MuntzElement& p, const ExponentSequence& seq, Interval interval,
                             std::size_t iterations, const PrecisionContext& ctx,
                             const ElevationOptions& options) {
  interval.validate();
  const std::size_t n = prefix_degree(p.exponents(), seq);
  const auto exponents = seq.materialize(n);
  const BasisKind basis =
      interval.a == 0.0 ? BasisKind::gelfond() : BasisKind::chebyshev(interval);
  if (interval.b != 1.0) throw DomainError("run_elevation works over [a, 1]; rescale [a, b] to [a/b, 1]");
  return run_elevation(control_points(p, exponents, basis, ctx), seq, iterations, ctx, options);
}

ElevationTrace run_elevation(const ControlPolygon& initial, const ExponentSequence& seq,
                             std::size_t iterations, const PrecisionContext& ctx,
                             const ElevationOptions& options) {
  ctx.validate();
  if (iterations == 0) throw ValidationError("iterations must be at least 1");
  initial.validate();
  const std::size_t n = initial.size() - 1;
  const std::vector<double> all = seq.materialize(n + iterations);
  if (!std::equal(initial.exponents.begin(), initial.exponents.end(), all.begin())) {
    throw ValidationError("initial polygon exponents are not a prefix of the sequence");
  }
  const bool gelfond = initial.basis.tag == BasisKind::Tag::gelfond;
  const Interval iv = initial.basis.interval;
  if (iv.b != 1.0) throw DomainError("run_elevation works over [a, 1]; rescale [a, b] to [a/b, 1]");

  const MuntzElement curve = to_monomial(initial, ctx);
  std::vector<double> check_ts;
  for (std::size_t i = 0; i < options.verify_points; ++i) {
    check_ts.push_back(iv.a + (iv.b - iv.a) * static_cast<double>(i) /
                                  static_cast<double>(std::max<std::size_t>(options.verify_points - 1, 1)));
  }
  const double scale = curve_scale(curve, check_ts) + 1.0;

  ElevationTrace trace;
  trace.requested_iterations = iterations;
  ControlPolygon poly = initial;
  std::vector<double> greville;
  std::optional<IntervalElevator> elev;
  if (gelfond) {
    greville = lift_greville(poly.exponents);
  } else {
    elev.emplace(poly.exponents, iv.a, n + iterations, ctx);
    if (n >= 1) greville = elev->monomial_control_points(1);
  }

  auto record = [&](std::size_t j) {
    trace.first_legs.push_back(first_leg(poly.points));
    if (stores_iteration(j, iterations)) {
      trace.polygons.push_back(poly);
      trace.stored_iterations.push_back(j);
    }
    if (options.metrics) trace.metrics.push_back(options.metrics(StepView{j, poly, greville}));
  };

  auto verify = [&](std::size_t j) {
    const std::size_t m = poly.size() - 1;
    double err = 0.0;
    if (!gelfond) {
      // Control points recomputed from the monomial form with the current functionals.
      const auto& eta = elev->functionals();
      std::vector<std::vector<Real>> acc(m + 1);
      for (std::size_t q = 0; q < curve.exponents().size(); ++q) {
        const auto col = eta.monomial_control_points(q);
        for (std::size_t i = 0; i <= m; ++i) {
          if (acc[i].empty()) acc[i].assign(poly.points[i].size(), Real(0.0, eta.bits()));
          for (std::size_t c = 0; c < poly.points[i].size(); ++c) {
            acc[i][c].add_product(col[i], Real(curve.coefficients()[q][c], eta.bits()));
          }
        }
      }
      for (std::size_t i = 0; i <= m; ++i)
        for (std::size_t c = 0; c < poly.points[i].size(); ++c)
          err = std::max(err, std::abs(acc[i][c].to_double() - poly.points[i][c]));
    }
    if (gelfond || m <= 24) {
      const auto sums = evaluate_polygon(poly, check_ts, ctx);
      for (std::size_t i = 0; i < check_ts.size(); ++i) {
        const auto want = curve.value(check_ts[i]);
        for (std::size_t c = 0; c < want.size(); ++c) err = std::max(err, std::abs(sums[i][c] - want[c]));
      }
    }
    if (err > ctx.residual_tolerance * scale) {
      throw NumericalFailure("represented curve drifted by " + std::to_string(err) + " at iteration " +
                                 std::to_string(j),
                             j);
    }
  };

  record(0);
  for (std::size_t j = 1; j <= iterations; ++j) {
    const std::size_t m = poly.size() - 1;
    const double next = all[m + 1];
    try {
      ElevationStep step;
      step.source_dim = m;
      if (gelfond) {
        poly = elevate_gelfond_step(poly, next);
        for (std::size_t i = 1; i <= m; ++i) step.xi.push_back(1.0 - poly.exponents[i] / next);
        if (greville.empty()) {
          greville = {0.0, 1.0};
        } else {
          std::vector<Point> g;
          for (double v : greville) g.push_back({v});
          const ControlPolygon gp{std::move(g), std::vector<double>(poly.exponents.begin(), poly.exponents.end() - 1),
                                  BasisKind::gelfond()};
          greville.clear();
          for (const auto& pt : elevate_gelfond_step(gp, next).points) greville.push_back(pt[0]);
        }
      } else {
        step = elev->advance(next);
        poly.points = apply_corner_cut(poly.points, step.xi);
        poly.exponents.push_back(next);
        greville = elev->monomial_control_points(1);
      }
      trace.steps.push_back(step);
      if (options.verify_every > 0 && (j % options.verify_every == 0 || j == iterations)) verify(j);
      record(j);
      if (options.observer) options.observer(StepView{j, poly, greville}, step);
    } catch (const NumericalFailure& e) {
      trace.failure = e.what();
      trace.failed_iteration = j;
      break;
    }
  }
  if (elev) {
    trace.escalations = elev->escalations();
    trace.final_bits = elev->bits();
  }
  return trace;
}

}  // namespace muntz
