#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "muntz/bases.hpp"
#include "muntz/elevation.hpp"
#include "muntz/exponents.hpp"

namespace muntz {

/// Declared by the experiment, never inferred from partial sums.
enum class ExpectedClass { unspecified, muntz, non_muntz };

std::string to_string(ExpectedClass c);
ExpectedClass parse_expected_class(const std::string& name);

struct ConvergenceReport {
  std::vector<IterationRecord> records;
  ExpectedClass expected_class = ExpectedClass::unspecified;

  /// Distance at iteration j; throws ValidationError if it was not recorded.
  double distance_at(std::size_t j) const;
};

/// zeta_i = eta_i(t^{r_1})^{1/r_1}, i = 0..m, with zeta_0 = a and zeta_m = b.
std::vector<double> greville_abscissae(const std::vector<double>& exponents, Interval interval,
                                       const PrecisionContext& ctx);

/// Same abscissae from already computed eta_i(t^{r_1}).
std::vector<double> greville_from_controls(const std::vector<double>& controls, double r1,
                                           Interval interval, double tolerance);

/// max_i ||P(zeta_i) - b_i||_inf.
double polygon_curve_distance(const ControlPolygon& polygon, const MuntzElement& p,
                              const PrecisionContext& ctx);
double polygon_curve_distance(const std::vector<Point>& points, const std::vector<double>& abscissae,
                              const MuntzElement& p);

/// eta_i(t^{r_1})^{r_k/r_1} - eta_i(t^{r_k}) over [a,1] for i = 0..m. Each
/// term is nonnegative in exact arithmetic.
std::vector<double> theorem7_terms(const std::vector<double>& exponents, double a, std::size_t k,
                                   const PrecisionContext& ctx);
/// max_i |theorem7_terms|.
double theorem7_gap(const std::vector<double>& exponents, double a, std::size_t k,
                    const PrecisionContext& ctx);

/// Largest gap between consecutive abscissae, including the gaps to a and b.
double node_max_gap(const std::vector<double>& exponents, Interval interval, const PrecisionContext& ctx);
double max_gap(const std::vector<double>& abscissae, Interval interval);

/// ||b_0 - b_1||_inf for every iteration of the trace.
std::vector<double> first_leg_series(const ElevationTrace& trace);

/// sup |P'| on [0, 1-eps] over sup |P| on [1-eps, 1], both on grids of
/// grid_size points. P must be scalar.
double chebyshev_ratio(const MuntzElement& p, double epsilon, std::size_t grid_size,
                       const PrecisionContext& ctx);

/// chebyshev_ratio of the first Gelfond-Bernstein function H_0 of
/// E(exponents), evaluated from its monomial form at high precision.
double gelfond_first_ratio(const std::vector<double>& exponents, double epsilon, std::size_t grid_size,
                           const PrecisionContext& ctx);

/// One-sided difference (B_0(a + h) - B_0(a)) / h over [a, 1].
double first_basis_slope(const std::vector<double>& exponents, double a, double h,
                         const PrecisionContext& ctx);

/// Metric hook for run_elevation that measures against the curve p.
std::function<IterationRecord(const StepView&)> convergence_metrics(MuntzElement p, Interval interval,
                                                                   double tolerance);

/// A ready-made experiment.
struct Preset {
  std::string id;
  std::string description;
  ExponentSequence sequence;
  Interval interval;
  /// Control points over Lambda_n in the basis of the interval.
  std::vector<Point> control_points;
  ExpectedClass expected_class = ExpectedClass::unspecified;
  std::size_t iterations = 100;
};

/// (0,0), (1,2), (3,2), (4,0).
std::vector<Point> default_quadrilateral();
/// Figures 1-4; throws ValidationError for other ids.
Preset figure_preset(int figure_id);
/// The r_i = i^2 sequence over [0.2, 1].
Preset necessity_preset();
/// "fig1".."fig4" or "necessity".
Preset preset_by_name(const std::string& name);
std::vector<std::string> preset_names();

struct ExperimentRun {
  MuntzElement curve;
  ControlPolygon initial;
  ElevationTrace trace;
  ConvergenceReport report;
};

/// Builds the initial polygon of the preset, elevates it and measures every iteration.
ExperimentRun run_preset(const Preset& preset, std::size_t iterations, const PrecisionContext& ctx,
                         const ElevationOptions& options = {});

ExperimentRun figure_experiment(int figure_id, std::size_t iterations, const PrecisionContext& ctx);

}  // namespace muntz
