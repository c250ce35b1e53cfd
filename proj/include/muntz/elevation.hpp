#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "muntz/bases.hpp"
#include "muntz/exponents.hpp"
#include "muntz/linalg.hpp"
#include "muntz/numerics.hpp"

namespace muntz {

/// Weights of one step E(Lambda_n) -> E(Lambda_{n+1}):
/// P_i' = (1 - xi_i) P_{i-1} + xi_i P_i for i = 1..n.
struct ElevationStep {
  std::vector<double> xi;
  std::size_t source_dim = 0;
};

/// Per-iteration convergence record.
struct IterationRecord {
  std::size_t iteration = 0;
  double polygon_curve_distance = 0.0;
  double first_leg_length = 0.0;
  double node_max_gap = 0.0;
};

struct ElevationTrace {
  /// Polygons for stored_iterations, in order.
  std::vector<ControlPolygon> polygons;
  std::vector<std::size_t> stored_iterations;
  /// One step per completed iteration.
  std::vector<ElevationStep> steps;
  /// One record per completed iteration, including iteration 0.
  std::vector<IterationRecord> metrics;
  /// ||b_0 - b_1||_inf for every completed iteration.
  std::vector<double> first_legs;
  /// Requested iteration count.
  std::size_t requested_iterations = 0;
  /// Number of times the working precision had to be raised.
  std::size_t escalations = 0;
  /// Width the dual functionals ended at (0 for the [0,1] path).
  unsigned final_bits = 0;
  /// Set when the run stopped early; the trace keeps what was computed.
  std::optional<std::string> failure;
  std::size_t failed_iteration = 0;

  std::size_t completed_iterations() const { return steps.size(); }
  bool complete() const { return !failure.has_value(); }
  const ControlPolygon& final_polygon() const { return polygons.back(); }
  /// The stored polygon of iteration j, or nullptr when it was not kept.
  const ControlPolygon* polygon_at(std::size_t j) const;
};

/// One step of the explicit scheme over [0,1]: interior weights r_i / r_{n+1}
/// on P_{i-1}.
ControlPolygon elevate_gelfond_step(const ControlPolygon& polygon, double next_exponent);

/// Applies P_i' = (1 - xi_i) P_{i-1} + xi_i P_i, keeping both ends.
std::vector<Point> apply_corner_cut(const std::vector<Point>& points, const std::vector<double>& xi);

/// Best weight xi_i for each interior new point on the segment [P_{i-1}, P_i],
/// together with the largest distance of any new point from its segment.
struct CornerCutRecovery {
  std::vector<double> xi;
  double max_residual = 0.0;
};
CornerCutRecovery recover_corner_cut(const std::vector<Point>& before, const std::vector<Point>& after);

/// Elevation over [a,1] with a primary and a shadow set of dual functionals
/// 64 bits apart. A step whose weights disagree between the two, or leave
/// [-tol, 1 + tol], is recomputed once at four times the width.
class IntervalElevator {
 public:
  /// Starts at E(exponents) over [a, 1]; `expected_degree` sizes the width.
  IntervalElevator(const std::vector<double>& exponents, double a, std::size_t expected_degree,
                   const PrecisionContext& ctx);

  std::size_t degree() const { return primary_->degree(); }
  const std::vector<double>& exponents() const { return primary_->exponents(); }
  unsigned bits() const { return primary_->bits(); }
  std::size_t escalations() const { return escalations_; }

  /// Raises the dimension and returns the verified weights.
  ElevationStep advance(double next_exponent);
  /// eta_i(t^{r_p}) at the current degree, as doubles.
  std::vector<double> monomial_control_points(std::size_t p) const;
  const ChebyshevDualFunctionals& functionals() const { return *primary_; }

 private:
  void rebuild(unsigned bits);
  std::vector<Real> checked(const std::vector<Real>& xi, const std::vector<Real>& shadow) const;

  double a_;
  PrecisionContext ctx_;
  std::size_t escalations_ = 0;
  std::optional<ChebyshevDualFunctionals> primary_;
  std::optional<ChebyshevDualFunctionals> shadow_;
};

/// One corner-cutting elevation step over [a,1], a > 0. The weights come from
/// the dual functionals of the two spaces, so the new polygon is exactly a
/// corner cut of the old one.
std::pair<ControlPolygon, ElevationStep> elevate_interval_step(const ControlPolygon& polygon,
                                                               double next_exponent,
                                                               const PrecisionContext& ctx);

/// S(i, j) = eta_i over [a,1] applied to the j-th Gelfond-Bernstein function,
/// so that [a,1]-control points = S * [0,1]-control points.
Matrix<double> restriction_matrix(const std::vector<double>& exponents, double a,
                                  const PrecisionContext& ctx);

/// What the per-iteration hook sees.
struct StepView {
  std::size_t iteration = 0;
  const ControlPolygon& polygon;
  /// eta_i(t^{r_1}) for the current polygon's space.
  const std::vector<double>& greville_controls;
};

struct ElevationOptions {
  /// Re-sum the polygon against the curve every this many iterations (0 = never).
  std::size_t verify_every = 10;
  std::size_t verify_points = 17;
  /// Builds the metrics record of each iteration (iteration 0 included).
  std::function<IterationRecord(const StepView&)> metrics;
  /// Called after every completed iteration.
  std::function<void(const StepView&, const ElevationStep&)> observer;
};

/// Iterated elevation from E(Lambda_n) for J steps, where Lambda_n is the
/// shortest prefix of `seq` containing the exponents of P. a = 0 takes the
/// explicit [0,1] scheme and a > 0 the dual-functional scheme; b must be 1.
ElevationTrace run_elevation(const MuntzElement& p, const ExponentSequence& seq, Interval interval,
                             std::size_t iterations, const PrecisionContext& ctx,
                             const ElevationOptions& options = {});

/// Same, starting from a control polygon over a prefix of `seq`.
ElevationTrace run_elevation(const ControlPolygon& initial, const ExponentSequence& seq,
                             std::size_t iterations, const PrecisionContext& ctx,
                             const ElevationOptions& options = {});

/// Which iterations a J-step trace keeps: all when J <= 256, else every 8th
/// and the last.
bool stores_iteration(std::size_t j, std::size_t iterations);

}  // namespace muntz
