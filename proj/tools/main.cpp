#include <cstdio>
#include <future>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "experiment_io.hpp"
#include "muntz/errors.hpp"

namespace {

using namespace muntz;
using namespace muntz::cli;

constexpr int kValidation = 2;
constexpr int kNumerical = 3;

template <class T>
std::vector<T> parse_list(const std::string& text, const char* option) {
  std::vector<T> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::istringstream one(item);
    T v{};
    if (!(one >> v) || !one.eof()) throw ValidationError(std::string(option) + ": bad value '" + item + "'");
    out.push_back(v);
  }
  if (out.empty()) throw ValidationError(std::string(option) + " is empty");
  return out;
}

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

int report_run(const TraceReport& r) {
  std::ostringstream line;
  line << r.config.name << ": " << r.completed_iterations << "/" << r.config.iterations << " iterations";
  if (!r.report.records.empty()) {
    line << ", distance " << r.report.records.front().polygon_curve_distance << " -> "
         << r.report.records.back().polygon_curve_distance;
  }
  line << ", escalations " << r.escalations << ", " << r.wall_seconds << " s";
  std::cout << line.str() << "\n";
  if (r.failure) {
    std::cerr << r.config.name << ": numerical failure at iteration " << r.failed_iteration << ": " << *r.failure
              << "\n";
    return kNumerical;
  }
  return 0;
}

int run_and_write(const ExperimentConfig& config) {
  const TraceReport r = run_config(config);
  for (const auto& path : write_outputs(r)) std::cout << "wrote " << path.string() << "\n";
  return report_run(r);
}

template <class F>
int guarded(F&& body, const std::string& label = "") {
  const std::string prefix = label.empty() ? "" : label + ": ";
  try {
    return body();
  } catch (const NumericalFailure& e) {
    std::cerr << prefix << "numerical failure";
    if (e.iteration() > 0) std::cerr << " at iteration " << e.iteration();
    std::cerr << ": " << e.what() << "\n";
    return kNumerical;
  } catch (const Error& e) {
    std::cerr << prefix << "error: " << e.what() << "\n";
    return kValidation;
  }
}

std::size_t default_degree(const ExponentSequence& seq) {
  return seq.prefix().size() >= 2 ? seq.prefix().size() - 1 : 3;
}

int diagnose(int theorem, const std::string& exps_arg, const std::string& a_arg, const std::string& m_arg,
             std::size_t k, double eps, std::size_t grid, const PrecisionContext& ctx) {
  const ExponentSequence seq = exponents_from_argument(exps_arg);
  switch (theorem) {
    case 4: {
      if (a_arg.empty()) throw ValidationError("--theorem 4 needs --a");
      const std::size_t m = m_arg.empty() ? default_degree(seq) : parse_list<std::size_t>(m_arg, "--m").front();
      const auto exps = seq.materialize(m);
      std::cout << "a,gap\n";
      for (double a : parse_list<double>(a_arg, "--a")) std::cout << num(a) << ',' << num(theorem4_gap(exps, a, std::nullopt, ctx)) << "\n";
      return 0;
    }
    case 7: {
      const double a = a_arg.empty() ? 0.2 : parse_list<double>(a_arg, "--a").front();
      const auto ms = parse_list<std::size_t>(m_arg.empty() ? "10,20,40,80" : m_arg, "--m");
      std::cout << "m,gap\n";
      for (std::size_t m : ms) std::cout << m << ',' << num(theorem7_gap(seq.materialize(m), a, k, ctx)) << "\n";
      return 0;
    }
    case 8: {
      const double a = a_arg.empty() ? 0.0 : parse_list<double>(a_arg, "--a").front();
      const auto ms = parse_list<std::size_t>(m_arg.empty() ? "10,20,40,80" : m_arg, "--m");
      std::cout << "m,node_gap\n";
      for (std::size_t m : ms) std::cout << m << ',' << num(node_max_gap(seq.materialize(m), {a, 1.0}, ctx)) << "\n";
      return 0;
    }
    case 9: {
      const auto ms = parse_list<std::size_t>(m_arg.empty() ? "4,8,16" : m_arg, "--m");
      std::cout << "m,ratio\n";
      for (std::size_t m : ms) std::cout << m << ',' << num(gelfond_first_ratio(seq.materialize(m), eps, grid, ctx)) << "\n";
      return 0;
    }
    default:
      throw ValidationError("--theorem must be 4, 7, 8 or 9");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dimension elevation of Muntz curves"};
  app.require_subcommand(1);

  int figure_id = 0;
  std::size_t iters = 100;
  std::string out_dir = ".";
  std::vector<std::string> formats;
  auto* figure = app.add_subcommand("figure", "Run one of the four figure presets");
  figure->add_option("id", figure_id, "Figure number 1-4")->required();
  figure->add_option("--iters", iters, "Number of elevation steps");
  figure->add_option("--out", out_dir, "Output directory");
  figure->add_option("--format", formats, "csv, svg or json (repeatable)");

  std::vector<std::string> config_files;
  auto* elevate = app.add_subcommand("elevate", "Run experiments from JSON configs, concurrently");
  elevate->add_option("configs", config_files, "Config files")->required();

  int theorem = 0;
  std::string exps_arg = "classical";
  std::string a_arg;
  std::string m_arg;
  std::size_t k = 3;
  double eps = 0.5;
  std::size_t grid = 401;
  auto* diag = app.add_subcommand("diagnose", "Gap and ratio series as CSV");
  diag->add_option("--theorem", theorem, "4, 7, 8 or 9")->required();
  diag->add_option("--exponents", exps_arg, "Preset name, 'classical' or a comma list");
  diag->add_option("--a", a_arg, "Left endpoint(s), comma separated");
  diag->add_option("--m", m_arg, "Degree(s), comma separated");
  diag->add_option("--k", k, "Exponent index for theorem 7");
  diag->add_option("--eps", eps, "Epsilon for theorem 9");
  diag->add_option("--grid", grid, "Grid size for theorem 9");

  std::string sums_exps = "classical";
  std::size_t sums_m = 0;
  auto* sums = app.add_subcommand("sums", "Partial sums of 1/r_i");
  sums->add_option("--exponents", sums_exps, "Preset name, 'classical' or a comma list");
  sums->add_option("--m", sums_m, "Number of terms")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kValidation;
  }

  PrecisionContext ctx;
  if (const int code = guarded([&] {
        ctx = PrecisionContext::from_environment();
        return 0;
      })) {
    return code;
  }

  if (figure->parsed()) {
    return guarded([&] {
      ExperimentConfig c = config_from_preset(figure_preset(figure_id));
      c.iterations = iters;
      c.precision = ctx;
      c.output.path = out_dir;
      if (!formats.empty()) c.output.formats = formats;
      return run_and_write(c);
    });
  }
  if (elevate->parsed()) {
    std::vector<std::future<int>> jobs;
    for (const auto& file : config_files) {
      jobs.push_back(std::async(std::launch::async, [file] {
        return guarded([&] { return run_and_write(load_config(file)); }, file);
      }));
    }
    int code = 0;
    for (auto& j : jobs) code = std::max(code, j.get());
    return code;
  }
  if (diag->parsed()) {
    return guarded([&] { return diagnose(theorem, exps_arg, a_arg, m_arg, k, eps, grid, ctx); });
  }
  return guarded([&] {
    if (sums_m < 1) throw ValidationError("--m must be at least 1");
    const auto s = muntz_partial_sums(exponents_from_argument(sums_exps), sums_m);
    std::cout << "# partial sums, no divergence verdict\n";
    std::cout << "m,sum_reciprocal,sum_density,sum_full\n";
    std::cout << sums_m << ',' << num(s.sum_reciprocal) << ',' << num(s.sum_density) << ',' << num(s.sum_full) << "\n";
    return 0;
  });
}
