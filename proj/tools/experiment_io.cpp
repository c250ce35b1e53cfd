#include "experiment_io.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "muntz/errors.hpp"

namespace muntz::cli {

using nlohmann::json;

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

[[noreturn]] void field_error(const std::string& field, const std::string& what) {
  throw ValidationError("config." + field + ": " + what);
}

template <class T>
T get_field(const json& j, const std::string& key, const std::string& path, const char* expected) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    field_error(path + key, std::string("expected ") + expected);
  }
}

std::vector<Point> points_from_json(const json& j, const std::string& field) {
  if (!j.is_array()) field_error(field, "expected a list of points");
  std::vector<Point> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const json& p = j[i];
    const std::string where = field + "[" + std::to_string(i) + "]";
    if (p.is_number()) {
      out.push_back({p.get<double>()});
      continue;
    }
    if (!p.is_array() || p.empty()) field_error(where, "expected a number or a list of numbers");
    Point q;
    for (const auto& c : p) {
      if (!c.is_number()) field_error(where, "coordinates must be numbers");
      q.push_back(c.get<double>());
    }
    out.push_back(std::move(q));
  }
  return out;
}

json points_to_json(const std::vector<Point>& pts) {
  json a = json::array();
  for (const auto& p : pts) a.push_back(p);
  return a;
}

bool same_precision(const PrecisionContext& x, const PrecisionContext& y) {
  return x.significand_bits == y.significand_bits && x.residual_tolerance == y.residual_tolerance &&
         x.comparison_tolerance == y.comparison_tolerance;
}

}  // namespace

bool operator==(const ExperimentConfig& x, const ExperimentConfig& y) {
  return x.name == y.name && x.exponents == y.exponents && x.interval == y.interval &&
         x.iterations == y.iterations && x.control_points == y.control_points &&
         x.coefficients == y.coefficients && same_precision(x.precision, y.precision) &&
         x.expected_class == y.expected_class && x.output == y.output;
}

void ExperimentConfig::validate() const {
  try {
    interval.validate();
  } catch (const ValidationError& e) {
    field_error("interval", e.what());
  }
  if (iterations < 1) field_error("iterations", "must be at least 1");
  try {
    precision.validate();
  } catch (const ValidationError& e) {
    field_error("precision", e.what());
  }
  const bool has_points = !control_points.empty();
  const bool has_coeffs = !coefficients.empty();
  if (has_points == has_coeffs) field_error("control_points", "give exactly one of control_points or coefficients");
  const auto& pts = has_points ? control_points : coefficients;
  const std::string which = has_points ? "control_points" : "coefficients";
  const std::size_t prefix = exponents.prefix().size();
  if (prefix < 2) field_error("exponents.prefix", "needs at least r_0 = 0 and r_1");
  if (pts.size() != prefix) {
    field_error(which, "has " + std::to_string(pts.size()) + " entries but exponents.prefix has " +
                           std::to_string(prefix));
  }
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (pts[i].size() != pts[0].size()) field_error(which, "all points must share one dimension");
    for (double c : pts[i]) {
      if (!std::isfinite(c)) field_error(which + "[" + std::to_string(i) + "]", "coordinate is not finite");
    }
  }
  try {
    exponents.materialize(prefix - 1 + iterations);
  } catch (const ValidationError& e) {
    field_error("exponents", e.what());
  }
  for (const auto& f : output.formats) {
    if (f != "json" && f != "csv" && f != "svg") field_error("output.formats", "unknown format '" + f + "'");
    if (f == "svg" && pts[0].size() != 2) field_error("output.formats", "svg output needs planar points");
  }
}

ExperimentConfig config_from_json(const json& j) {
  if (!j.is_object()) throw ValidationError("config: expected a JSON object");
  ExperimentConfig c;
  if (j.contains("name")) c.name = get_field<std::string>(j, "name", "", "a string");

  if (!j.contains("exponents")) field_error("exponents", "missing");
  const json& e = j.at("exponents");
  if (!e.is_object()) field_error("exponents", "expected an object");
  const auto prefix = get_field<std::vector<double>>(e, "prefix", "exponents.", "a list of numbers");
  ExtensionRule rule = ExtensionRule::explicit_list;
  if (e.contains("rule")) {
    try {
      rule = parse_extension_rule(get_field<std::string>(e, "rule", "exponents.", "a string"));
    } catch (const ValidationError& err) {
      field_error("exponents.rule", err.what());
    }
  }
  std::vector<double> params;
  if (e.contains("rule_params")) {
    params = get_field<std::vector<double>>(e, "rule_params", "exponents.", "a list of numbers");
  }
  try {
    c.exponents = ExponentSequence(prefix, rule, params);
  } catch (const ValidationError& err) {
    field_error("exponents", err.what());
  }

  if (j.contains("interval")) {
    const json& iv = j.at("interval");
    c.interval.a = get_field<double>(iv, "a", "interval.", "a number");
    c.interval.b = get_field<double>(iv, "b", "interval.", "a number");
  }
  if (j.contains("iterations")) {
    const json& it = j.at("iterations");
    if (!it.is_number_integer() || it.get<long long>() < 1) field_error("iterations", "expected a positive integer");
    c.iterations = it.get<std::size_t>();
  }
  if (j.contains("control_points")) c.control_points = points_from_json(j.at("control_points"), "control_points");
  if (j.contains("coefficients")) c.coefficients = points_from_json(j.at("coefficients"), "coefficients");

  c.precision = PrecisionContext::from_environment();
  if (j.contains("precision")) {
    const json& p = j.at("precision");
    if (!p.is_object()) field_error("precision", "expected an object");
    if (p.contains("significand_bits")) {
      c.precision.significand_bits = get_field<unsigned>(p, "significand_bits", "precision.", "an integer");
    }
    if (p.contains("residual_tolerance")) {
      c.precision.residual_tolerance = get_field<double>(p, "residual_tolerance", "precision.", "a number");
    }
    if (p.contains("comparison_tolerance")) {
      c.precision.comparison_tolerance = get_field<double>(p, "comparison_tolerance", "precision.", "a number");
    }
  }
  if (j.contains("expected_class") && !j.at("expected_class").is_null()) {
    try {
      c.expected_class = parse_expected_class(get_field<std::string>(j, "expected_class", "", "a string"));
    } catch (const ValidationError& err) {
      field_error("expected_class", err.what());
    }
  }
  if (j.contains("output")) {
    const json& o = j.at("output");
    if (o.contains("formats")) c.output.formats = get_field<std::vector<std::string>>(o, "formats", "output.", "a list of strings");
    if (o.contains("path")) c.output.path = get_field<std::string>(o, "path", "output.", "a string");
  }
  c.validate();
  return c;
}

json config_to_json(const ExperimentConfig& c) {
  json j;
  j["name"] = c.name;
  j["exponents"] = {{"prefix", c.exponents.prefix()},
                    {"rule", to_string(c.exponents.rule())},
                    {"rule_params", c.exponents.params()}};
  j["interval"] = {{"a", c.interval.a}, {"b", c.interval.b}};
  j["iterations"] = c.iterations;
  if (!c.control_points.empty()) j["control_points"] = points_to_json(c.control_points);
  if (!c.coefficients.empty()) j["coefficients"] = points_to_json(c.coefficients);
  j["precision"] = {{"significand_bits", c.precision.significand_bits},
                    {"residual_tolerance", c.precision.residual_tolerance},
                    {"comparison_tolerance", c.precision.comparison_tolerance}};
  j["expected_class"] = to_string(c.expected_class);
  j["output"] = {{"formats", c.output.formats}, {"path", c.output.path}};
  return j;
}

ExperimentConfig load_config(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ValidationError("cannot read config file " + file.string());
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ValidationError(file.string() + ": " + e.what());
  }
  ExperimentConfig c = config_from_json(j);
  if (!j.contains("name")) c.name = file.stem().string();
  return c;
}

ExperimentConfig config_from_preset(const Preset& preset) {
  ExperimentConfig c;
  c.name = preset.id;
  c.exponents = preset.sequence;
  c.interval = preset.interval;
  c.iterations = preset.iterations;
  c.control_points = preset.control_points;
  c.precision = PrecisionContext{};
  c.expected_class = preset.expected_class;
  return c;
}

TraceReport run_config(const ExperimentConfig& config) {
  config.validate();
  const auto start = std::chrono::steady_clock::now();
  const PrecisionContext& ctx = config.precision;
  const double b = config.interval.b;
  const Interval unit{config.interval.a / b, 1.0};
  const std::vector<double>& prefix = config.exponents.prefix();

  std::vector<Point> points = config.control_points;
  if (points.empty()) {
    std::vector<Point> scaled = config.coefficients;
    for (std::size_t p = 0; p < scaled.size(); ++p) {
      for (double& v : scaled[p]) v *= std::pow(b, prefix[p]);
    }
    const BasisKind basis = unit.a == 0.0 ? BasisKind::gelfond() : BasisKind::chebyshev(unit);
    points = control_points(MuntzElement(prefix, scaled), prefix, basis, ctx).points;
  }

  Preset preset{config.name, "", config.exponents, unit, points, config.expected_class, config.iterations};
  ExperimentRun run = run_preset(preset, config.iterations, ctx);

  TraceReport r;
  r.config = config;
  for (std::size_t s = 0; s < run.trace.polygons.size(); ++s) {
    r.polygons.push_back({run.trace.stored_iterations[s], run.trace.polygons[s].points});
  }
  r.report = run.report;
  for (auto& rec : r.report.records) rec.node_max_gap *= b;
  r.first_legs = run.trace.first_legs;
  r.completed_iterations = run.trace.completed_iterations();
  r.escalations = run.trace.escalations;
  r.final_bits = run.trace.final_bits;
  r.failure = run.trace.failure;
  r.failed_iteration = run.trace.failed_iteration;
  r.curve_exponents = run.curve.exponents();
  r.curve_coefficients = run.curve.coefficients();
  for (std::size_t p = 0; p < r.curve_coefficients.size(); ++p) {
    for (double& v : r.curve_coefficients[p]) v /= std::pow(b, r.curve_exponents[p]);
  }
  r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

json report_to_json(const TraceReport& r) {
  json j;
  j["config"] = config_to_json(r.config);
  j["runtime"] = {{"wall_seconds", r.wall_seconds},
                  {"escalations", r.escalations},
                  {"final_bits", r.final_bits},
                  {"completed_iterations", r.completed_iterations},
                  {"failure", r.failure ? json(*r.failure) : json(nullptr)},
                  {"failed_iteration", r.failed_iteration}};
  j["curve"] = {{"exponents", r.curve_exponents}, {"coefficients", points_to_json(r.curve_coefficients)}};
  json polys = json::array();
  for (const auto& p : r.polygons) polys.push_back({{"iteration", p.iteration}, {"points", points_to_json(p.points)}});
  j["polygons"] = std::move(polys);
  json recs = json::array();
  for (const auto& rec : r.report.records) {
    recs.push_back({{"iteration", rec.iteration},
                    {"distance", rec.polygon_curve_distance},
                    {"first_leg", rec.first_leg_length},
                    {"node_gap", rec.node_max_gap}});
  }
  j["report"] = {{"expected_class", to_string(r.report.expected_class)}, {"records", std::move(recs)}};
  j["first_legs"] = r.first_legs;
  return j;
}

TraceReport report_from_json(const json& j) {
  TraceReport r;
  try {
    r.config = config_from_json(j.at("config"));
    const json& rt = j.at("runtime");
    r.wall_seconds = rt.at("wall_seconds").get<double>();
    r.escalations = rt.at("escalations").get<std::size_t>();
    r.final_bits = rt.at("final_bits").get<unsigned>();
    r.completed_iterations = rt.at("completed_iterations").get<std::size_t>();
    if (!rt.at("failure").is_null()) r.failure = rt.at("failure").get<std::string>();
    r.failed_iteration = rt.at("failed_iteration").get<std::size_t>();
    r.curve_exponents = j.at("curve").at("exponents").get<std::vector<double>>();
    r.curve_coefficients = points_from_json(j.at("curve").at("coefficients"), "curve.coefficients");
    for (const auto& p : j.at("polygons")) {
      r.polygons.push_back({p.at("iteration").get<std::size_t>(), points_from_json(p.at("points"), "points")});
    }
    r.report.expected_class = parse_expected_class(j.at("report").at("expected_class").get<std::string>());
    for (const auto& rec : j.at("report").at("records")) {
      r.report.records.push_back({rec.at("iteration").get<std::size_t>(), rec.at("distance").get<double>(),
                                  rec.at("first_leg").get<double>(), rec.at("node_gap").get<double>()});
    }
    r.first_legs = j.at("first_legs").get<std::vector<double>>();
  } catch (const json::exception& e) {
    throw ValidationError(std::string("trace report: ") + e.what());
  }
  return r;
}

std::string report_to_csv(const TraceReport& r) {
  const std::size_t dim = r.polygons.empty() || r.polygons[0].points.empty() ? 0 : r.polygons[0].points[0].size();
  std::ostringstream out;
  out << "iteration,point_index";
  for (std::size_t c = 0; c < dim; ++c) out << ",coord_" << c;
  out << ",distance,first_leg,node_gap\n";
  for (const auto& poly : r.polygons) {
    IterationRecord rec;
    for (const auto& x : r.report.records) {
      if (x.iteration == poly.iteration) rec = x;
    }
    for (std::size_t i = 0; i < poly.points.size(); ++i) {
      out << poly.iteration << ',' << i;
      for (double v : poly.points[i]) out << ',' << num(v);
      out << ',' << num(rec.polygon_curve_distance) << ',' << num(rec.first_leg_length) << ','
          << num(rec.node_max_gap) << '\n';
    }
  }
  return out.str();
}

std::string report_to_svg(const TraceReport& r) {
  if (r.polygons.empty()) throw ValidationError("no polygons to draw");
  const auto& first = r.polygons.front().points;
  if (first.empty() || first[0].size() != 2) throw ValidationError("svg output needs planar points");
  double x0 = first[0][0], x1 = x0, y0 = first[0][1], y1 = y0;
  for (const auto& p : first) {
    x0 = std::min(x0, p[0]);
    x1 = std::max(x1, p[0]);
    y0 = std::min(y0, p[1]);
    y1 = std::max(y1, p[1]);
  }
  const double w = x1 > x0 ? x1 - x0 : 1.0;
  const double h = y1 > y0 ? y1 - y0 : 1.0;
  x0 -= 0.1 * w;
  y0 -= 0.1 * h;
  const double vw = 1.2 * w;
  const double vh = 1.2 * h;
  const double top = y0 + vh;
  const double px = 800.0;
  const double py = px * vh / vw;

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << px << "\" height=\"" << py
      << "\" viewBox=\"" << num(x0) << ' ' << num(-top) << ' ' << num(vw) << ' ' << num(vh) << "\">\n";
  out << "<rect x=\"" << num(x0) << "\" y=\"" << num(-top) << "\" width=\"" << num(vw) << "\" height=\""
      << num(vh) << "\" fill=\"white\"/>\n";

  const std::size_t k = std::max<std::size_t>(1, r.config.iterations / 10);
  std::vector<const StoredPolygon*> shown;
  for (const auto& p : r.polygons) {
    if (p.iteration % k == 0 || &p == &r.polygons.back()) shown.push_back(&p);
  }
  for (std::size_t s = 0; s < shown.size(); ++s) {
    const double f = shown.size() > 1 ? static_cast<double>(s) / static_cast<double>(shown.size() - 1) : 1.0;
    const int cr = static_cast<int>(std::lround(198 + f * (8 - 198)));
    const int cg = static_cast<int>(std::lround(219 + f * (48 - 219)));
    const int cb = static_cast<int>(std::lround(239 + f * (107 - 239)));
    out << "<polyline data-iteration=\"" << shown[s]->iteration << "\" fill=\"none\" stroke=\"rgb(" << cr << ','
        << cg << ',' << cb << ")\" stroke-width=\"1.5\" vector-effect=\"non-scaling-stroke\" points=\"";
    for (const auto& p : shown[s]->points) out << num(p[0]) << ',' << num(-p[1]) << ' ';
    out << "\"/>\n";
  }

  const MuntzElement curve(r.curve_exponents, r.curve_coefficients);
  const double a = r.config.interval.a;
  const double b = r.config.interval.b;
  out << "<polyline class=\"curve\" fill=\"none\" stroke=\"red\" stroke-width=\"2\" "
         "vector-effect=\"non-scaling-stroke\" points=\"";
  for (int i = 0; i < 256; ++i) {
    const Point v = curve.value(a + (b - a) * i / 255.0);
    out << num(v[0]) << ',' << num(-v[1]) << ' ';
  }
  out << "\"/>\n</svg>\n";
  return out.str();
}

void write_atomically(const std::filesystem::path& file, const std::string& contents) {
  static std::atomic<unsigned> counter{0};
  namespace fs = std::filesystem;
  std::error_code ec;
  if (file.has_parent_path()) fs::create_directories(file.parent_path(), ec);
  if (ec) throw ValidationError("cannot create output directory " + file.parent_path().string());
  fs::path tmp = file;
  tmp += ".tmp." + std::to_string(::getpid()) + "." + std::to_string(counter++);
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw ValidationError("cannot write " + tmp.string());
    out << contents;
    out.flush();
    if (!out) {
      fs::remove(tmp, ec);
      throw ValidationError("cannot write " + tmp.string());
    }
  }
  fs::rename(tmp, file, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw ValidationError("cannot move output into place at " + file.string());
  }
}

std::vector<std::filesystem::path> write_outputs(const TraceReport& r) {
  std::vector<std::filesystem::path> written;
  const std::filesystem::path dir(r.config.output.path);
  for (const auto& f : r.config.output.formats) {
    const auto file = dir / (r.config.name + "." + f);
    if (f == "json") write_atomically(file, report_to_json(r).dump(2) + "\n");
    else if (f == "csv") write_atomically(file, report_to_csv(r));
    else if (f == "svg") write_atomically(file, report_to_svg(r));
    written.push_back(file);
  }
  return written;
}

ExponentSequence exponents_from_argument(const std::string& arg) {
  if (arg == "classical") return ExponentSequence::classical();
  for (const auto& name : preset_names()) {
    if (arg == name) return preset_by_name(name).sequence;
  }
  std::vector<double> values;
  std::stringstream ss(arg);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      values.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ValidationError("exponents: '" + item + "' is not a number, a preset name or 'classical'");
    }
  }
  if (values.empty()) throw ValidationError("exponents: empty list");
  if (values.front() != 0.0) values.insert(values.begin(), 0.0);
  return ExponentSequence(values, ExtensionRule::explicit_list);
}

}  // namespace muntz::cli
