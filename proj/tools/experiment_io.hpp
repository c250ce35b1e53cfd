#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "muntz/diagnostics.hpp"

namespace muntz::cli {

struct OutputSpec {
  std::vector<std::string> formats{"json"};
  std::string path = ".";

  friend bool operator==(const OutputSpec&, const OutputSpec&) = default;
};

/// One elevation experiment as read from a JSON document.
struct ExperimentConfig {
  std::string name = "experiment";
  ExponentSequence exponents = ExponentSequence::classical();
  Interval interval;
  std::size_t iterations = 100;
  /// Exactly one of these two is set; both hold one point per prefix exponent.
  std::vector<Point> control_points;
  std::vector<Point> coefficients;
  PrecisionContext precision;
  ExpectedClass expected_class = ExpectedClass::unspecified;
  OutputSpec output;

  /// Throws ValidationError naming the offending field.
  void validate() const;
};

bool operator==(const ExperimentConfig& x, const ExperimentConfig& y);

ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const ExperimentConfig& c);
ExperimentConfig load_config(const std::filesystem::path& file);

/// The config a preset corresponds to; the bundled preset files hold exactly this.
ExperimentConfig config_from_preset(const Preset& preset);

struct StoredPolygon {
  std::size_t iteration = 0;
  std::vector<Point> points;
};

struct TraceReport {
  ExperimentConfig config;
  std::vector<StoredPolygon> polygons;
  ConvergenceReport report;
  std::vector<double> first_legs;
  std::size_t completed_iterations = 0;
  std::size_t escalations = 0;
  unsigned final_bits = 0;
  double wall_seconds = 0.0;
  std::optional<std::string> failure;
  std::size_t failed_iteration = 0;
  /// Monomial coefficients of the curve over the config interval.
  std::vector<double> curve_exponents;
  std::vector<Point> curve_coefficients;
};

nlohmann::json report_to_json(const TraceReport& r);
TraceReport report_from_json(const nlohmann::json& j);

/// Runs the experiment over [a/b, 1] and reports it in the units of [a, b].
TraceReport run_config(const ExperimentConfig& config);

/// iteration,point_index,coord_0..coord_{s-1},distance,first_leg,node_gap
std::string report_to_csv(const TraceReport& r);
/// Initial polygon, every k-th polygon with k = iterations / 10, and the curve in red.
std::string report_to_svg(const TraceReport& r);

/// Writes through a temporary file in the same directory and renames it into place.
void write_atomically(const std::filesystem::path& file, const std::string& contents);

/// Writes every format listed in config.output; returns the written paths.
std::vector<std::filesystem::path> write_outputs(const TraceReport& r);

/// "fig3", "classical" or a comma-separated list such as "0,1,2.5".
ExponentSequence exponents_from_argument(const std::string& arg);

}  // namespace muntz::cli
