#include "muntz/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "muntz/errors.hpp"

namespace muntz {

std::string to_string(ExpectedClass c) {
  switch (c) {
    case ExpectedClass::muntz: return "muntz";
    case ExpectedClass::non_muntz: return "non-muntz";
    case ExpectedClass::unspecified: return "unspecified";
  }
  return "unspecified";
}

ExpectedClass parse_expected_class(const std::string& name) {
  if (name == "muntz") return ExpectedClass::muntz;
  if (name == "non-muntz") return ExpectedClass::non_muntz;
  if (name == "unspecified" || name.empty()) return ExpectedClass::unspecified;
  throw ValidationError("expected_class must be 'muntz' or 'non-muntz', got '" + name + "'");
}

double ConvergenceReport::distance_at(std::size_t j) const {
  for (const auto& r : records) {
    if (r.iteration == j) return r.polygon_curve_distance;
  }
  throw ValidationError("no record for iteration " + std::to_string(j));
}

std::vector<double> greville_from_controls(const std::vector<double>& controls, double r1,
                                           Interval interval, double tolerance) {
  std::vector<double> z(controls.size());
  for (std::size_t i = 0; i < controls.size(); ++i) {
    const double eta = controls[i];
    if (eta < -tolerance) {
      throw NumericalFailure("negative control point " + std::to_string(eta) + " of t^r1 at index " +
                             std::to_string(i));
    }
    z[i] = std::pow(std::max(eta, 0.0), 1.0 / r1);
  }
  if (!z.empty()) {
    z.front() = interval.a;
    z.back() = interval.b;
  }
  return z;
}

std::vector<double> greville_abscissae(const std::vector<double>& exponents, Interval interval,
                                       const PrecisionContext& ctx) {
  validate_exponents(exponents);
  interval.validate();
  if (exponents.size() < 2) throw ValidationError("Greville abscissae need m >= 1");
  const double r1 = exponents[1];
  BasisKind basis = interval.a == 0.0 ? BasisKind::gelfond() : BasisKind::chebyshev(interval);
  // Over [0, b] the abscissae are b times those over [0, 1].
  const double stretch = interval.a == 0.0 ? interval.b : 1.0;
  const auto poly = control_points(MuntzElement::scalar({r1}, {1.0}), exponents, basis, ctx);
  std::vector<double> controls;
  for (const auto& p : poly.points) controls.push_back(p[0]);
  auto z = greville_from_controls(controls, r1, Interval{interval.a / stretch, interval.b / stretch},
                                  ctx.comparison_tolerance);
  for (double& v : z) v *= stretch;
  z.front() = interval.a;
  z.back() = interval.b;
  return z;
}

double polygon_curve_distance(const std::vector<Point>& points, const std::vector<double>& abscissae,
                              const MuntzElement& p) {
  if (points.size() != abscissae.size()) throw ValidationError("one abscissa per control point expected");
  double d = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const Point v = p.value(abscissae[i]);
    if (v.size() != points[i].size()) throw ValidationError("curve and polygon differ in dimension");
    for (std::size_t c = 0; c < v.size(); ++c) d = std::max(d, std::abs(v[c] - points[i][c]));
  }
  return d;
}

double polygon_curve_distance(const ControlPolygon& polygon, const MuntzElement& p,
                              const PrecisionContext& ctx) {
  polygon.validate();
  if (polygon.size() == 1) {
    return polygon_curve_distance(polygon.points, {polygon.basis.interval.a}, p);
  }
  return polygon_curve_distance(polygon.points,
                                greville_abscissae(polygon.exponents, polygon.basis.interval, ctx), p);
}

std::vector<double> theorem7_terms(const std::vector<double>& exponents, double a, std::size_t k,
                                   const PrecisionContext& ctx) {
  validate_exponents(exponents);
  const std::size_t m = exponents.size() - 1;
  if (k < 1 || k > m) throw ValidationError("theorem7 index k must satisfy 1 <= k <= m");
  if (!(a > 0.0 && a < 1.0)) throw DomainError("theorem7 needs 0 < a < 1");
  const BasisKind basis = BasisKind::chebyshev({a, 1.0});
  const auto first = control_points(MuntzElement::scalar({exponents[1]}, {1.0}), exponents, basis, ctx);
  if (k == 1) return std::vector<double>(m + 1, 0.0);
  const auto kth = control_points(MuntzElement::scalar({exponents[k]}, {1.0}), exponents, basis, ctx);
  const double power = exponents[k] / exponents[1];
  std::vector<double> terms(m + 1);
  for (std::size_t i = 0; i <= m; ++i) {
    terms[i] = std::pow(std::max(first.points[i][0], 0.0), power) - kth.points[i][0];
  }
  return terms;
}

double theorem7_gap(const std::vector<double>& exponents, double a, std::size_t k,
                    const PrecisionContext& ctx) {
  double g = 0.0;
  for (double t : theorem7_terms(exponents, a, k, ctx)) g = std::max(g, std::abs(t));
  return g;
}

double max_gap(const std::vector<double>& z, Interval interval) {
  if (z.empty()) return interval.b - interval.a;
  double g = std::max(z.front() - interval.a, interval.b - z.back());
  for (std::size_t i = 1; i < z.size(); ++i) g = std::max(g, z[i] - z[i - 1]);
  return g;
}

double node_max_gap(const std::vector<double>& exponents, Interval interval, const PrecisionContext& ctx) {
  return max_gap(greville_abscissae(exponents, interval, ctx), interval);
}

std::vector<double> first_leg_series(const ElevationTrace& trace) {
  if (trace.first_legs.empty()) throw ValidationError("empty trace");
  return trace.first_legs;
}

double chebyshev_ratio(const MuntzElement& p, double epsilon, std::size_t grid_size,
                       const PrecisionContext& ctx) {
  if (p.dimension() != 1) throw ValidationError("chebyshev_ratio needs a scalar element");
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw DomainError("epsilon must lie in (0, 1)");
  if (grid_size < 2) throw ValidationError("grid needs at least two points");
  const double split = 1.0 - epsilon;
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < grid_size; ++i) {
    const double u = static_cast<double>(i) / static_cast<double>(grid_size - 1);
    num = std::max(num, std::abs(p.derivative(split * u)[0]));
    den = std::max(den, std::abs(p.value(split + epsilon * u)[0]));
  }
  if (den < ctx.residual_tolerance) throw DomainError("sup of |P| on [1-eps, 1] is below tolerance");
  return num / den;
}

double gelfond_first_ratio(const std::vector<double>& exponents, double epsilon, std::size_t grid_size,
                           const PrecisionContext& ctx) {
  validate_exponents(exponents);
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw DomainError("epsilon must lie in (0, 1)");
  if (grid_size < 2) throw ValidationError("grid needs at least two points");
  const GelfondBernsteinBasis basis(exponents);
  const unsigned bits = basis.working_bits(ctx.extended());
  PrecisionScope scope(bits);
  const RealMatrix m = basis.monomial_coefficients(bits);
  const std::size_t n = exponents.size();
  auto h0 = [&](double t, bool derivative) {
    Real sum(0.0, bits);
    const Real x(t, bits);
    for (std::size_t p = 0; p < n; ++p) {
      const double r = exponents[p];
      if (derivative) {
        if (r == 0.0) continue;
        sum += m(0, p) * Real(r, bits) * (r == 1.0 ? Real(1.0, bits) : pow(x, Real(r - 1.0, bits)));
      } else {
        sum += m(0, p) * eval_ft(x, r);
      }
    }
    return abs(sum);
  };
  const double split = 1.0 - epsilon;
  Real num(0.0, bits);
  Real den(0.0, bits);
  for (std::size_t i = 0; i < grid_size; ++i) {
    const double u = static_cast<double>(i) / static_cast<double>(grid_size - 1);
    num = max(num, h0(split * u, true));
    den = max(den, h0(split + epsilon * u, false));
  }
  if (den.to_double() < ctx.residual_tolerance) {
    throw DomainError("sup of |H_0| on [1-eps, 1] is below tolerance");
  }
  return (num / den).to_double();
}

double first_basis_slope(const std::vector<double>& exponents, double a, double h,
                         const PrecisionContext& ctx) {
  validate_exponents(exponents);
  if (!(a > 0.0 && a + h < 1.0 && h > 0.0)) throw DomainError("need 0 < a < a + h < 1");
  const std::size_t n = exponents.size() - 1;
  const ChebyshevBernsteinBasis basis(exponents, {a, 1.0}, chebyshev_basis_bits(n, ctx.extended()));
  const unsigned bits = basis.bits();
  const Real step(h, bits);
  const Real at = basis.values(Real(a, bits) + step)[0];
  return ((at - Real(1.0, bits)) / step).to_double();
}

std::function<IterationRecord(const StepView&)> convergence_metrics(MuntzElement p, Interval interval,
                                                                   double tolerance) {
  return [p = std::move(p), interval, tolerance](const StepView& view) {
    IterationRecord rec;
    rec.iteration = view.iteration;
    const auto& pts = view.polygon.points;
    std::vector<double> z;
    if (view.greville_controls.empty()) {
      z.assign(pts.size(), interval.a);
    } else {
      z = greville_from_controls(view.greville_controls, view.polygon.exponents[1], interval, tolerance);
    }
    rec.polygon_curve_distance = polygon_curve_distance(pts, z, p);
    rec.node_max_gap = max_gap(z, interval);
    if (pts.size() >= 2) {
      for (std::size_t c = 0; c < pts[0].size(); ++c) {
        rec.first_leg_length = std::max(rec.first_leg_length, std::abs(pts[0][c] - pts[1][c]));
      }
    }
    return rec;
  };
}

std::vector<Point> default_quadrilateral() { return {{0.0, 0.0}, {1.0, 2.0}, {3.0, 2.0}, {4.0, 0.0}}; }

Preset figure_preset(int figure_id) {
  switch (figure_id) {
    case 1:
      return {"fig1", "r = (1,2,3), r_i = 2i for i >= 4, over [0,1]",
              ExponentSequence::affine({0, 1, 2, 3}, 2.0, 0.0), {0.0, 1.0}, default_quadrilateral(),
              ExpectedClass::muntz, 100};
    case 2:
      return {"fig2", "r = (1,2,3), r_i = i^2 for i >= 4, over [0,1]",
              ExponentSequence::power({0, 1, 2, 3}, 2.0), {0.0, 1.0}, default_quadrilateral(),
              ExpectedClass::non_muntz, 100};
    case 3:
      return {"fig3", "r = (2,4,10), r_i = 2i + 5 for i >= 4, over [0,1]",
              ExponentSequence::affine({0, 2, 4, 10}, 2.0, 5.0), {0.0, 1.0}, default_quadrilateral(),
              ExpectedClass::muntz, 100};
    case 4:
      return {"fig4", "r = (1,2,3), r_i = 4 - 1/i for i >= 4, over [0,1]",
              ExponentSequence::reciprocal({0, 1, 2, 3}, 4.0, 1.0), {0.0, 1.0}, default_quadrilateral(),
              ExpectedClass::non_muntz, 100};
    default:
      throw ValidationError("figure id must be 1, 2, 3 or 4, got " + std::to_string(figure_id));
  }
}

Preset necessity_preset() {
  return {"necessity", "r = (1,2,3), r_i = i^2 for i >= 4, over [0.2,1]",
          ExponentSequence::power({0, 1, 2, 3}, 2.0), {0.2, 1.0}, default_quadrilateral(),
          ExpectedClass::non_muntz, 100};
}

std::vector<std::string> preset_names() { return {"fig1", "fig2", "fig3", "fig4", "necessity"}; }

Preset preset_by_name(const std::string& name) {
  if (name == "necessity") return necessity_preset();
  for (int id = 1; id <= 4; ++id) {
    if (name == "fig" + std::to_string(id)) return figure_preset(id);
  }
  throw ValidationError("unknown preset '" + name + "'");
}

ExperimentRun run_preset(const Preset& preset, std::size_t iterations, const PrecisionContext& ctx,
                         const ElevationOptions& options) {
  const std::size_t n = preset.control_points.size() - 1;
  const BasisKind basis =
      preset.interval.a == 0.0 ? BasisKind::gelfond() : BasisKind::chebyshev(preset.interval);
  ControlPolygon initial{preset.control_points, preset.sequence.materialize(n), basis};
  initial.validate();
  MuntzElement curve = to_monomial(initial, ctx);
  ElevationOptions opts = options;
  if (!opts.metrics) opts.metrics = convergence_metrics(curve, preset.interval, ctx.comparison_tolerance);
  ElevationTrace trace = run_elevation(initial, preset.sequence, iterations, ctx, opts);
  ConvergenceReport report{trace.metrics, preset.expected_class};
  return {std::move(curve), std::move(initial), std::move(trace), std::move(report)};
}

ExperimentRun figure_experiment(int figure_id, std::size_t iterations, const PrecisionContext& ctx) {
  return run_preset(figure_preset(figure_id), iterations, ctx);
}

}  // namespace muntz
