// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>
#include <string>

#include "muntz/diagnostics.hpp"
#include "muntz/schur.hpp"
#include "oracles.hpp"

using namespace muntz;

namespace {

const PrecisionContext kCtx;
const PrecisionContext kExt = PrecisionContext{}.extended();

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      if (pass) detail << "first failure: " << what << "; ";
      pass = false;
    }
  }
};

int failures = 0;

void criterion(int id, const std::string& name, double limit_seconds, const std::function<void(Outcome&)>& body) {
  Outcome out;
  const auto start = std::chrono::steady_clock::now();
  try {
    body(out);
  } catch (const std::exception& e) {
    out.require(false, std::string("exception: ") + e.what());
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (limit_seconds > 0.0) out.require(secs < limit_seconds, "runtime over " + std::to_string(limit_seconds) + " s");
  if (!out.pass) ++failures;
  std::printf("%s %2d %-34s %8.2fs  %s\n", out.pass ? "PASS" : "FAIL", id, name.c_str(), secs, out.detail.str().c_str());
  std::fflush(stdout);
}

std::vector<double> linspace(double lo, double hi, std::size_t count) {
  std::vector<double> g(count);
  for (std::size_t i = 0; i < count; ++i) g[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
  return g;
}

std::vector<double> classical(std::size_t m) {
  std::vector<double> r(m + 1);
  for (std::size_t i = 0; i <= m; ++i) r[i] = static_cast<double>(i);
  return r;
}

// The five preset runs are shared by criteria 4-8.
std::map<std::string, ExperimentRun>& preset_runs() {
  static std::map<std::string, ExperimentRun> runs;
  return runs;
}

const ExperimentRun& preset_run(const std::string& name) {
  auto& runs = preset_runs();
  auto it = runs.find(name);
  if (it == runs.end()) it = runs.emplace(name, run_preset(preset_by_name(name), 100, kCtx)).first;
  return it->second;
}

void classical_reduction(Outcome& out) {
  double err_g = 0.0;
  double err_c = 0.0;
  for (std::size_t n = 1; n <= 10; ++n) {
    const auto r = classical(n);
    const GelfondBernsteinBasis g(r);
    const ChebyshevBernsteinBasis c(r, {0.5, 1.0}, chebyshev_basis_bits(n, kCtx));
    for (double t : linspace(0.0, 1.0, 100)) {
      const auto h = g.values(t, kCtx);
      const auto b = c.values(0.5 + 0.5 * t);
      for (std::size_t k = 0; k <= n; ++k) {
        err_g = std::max(err_g, std::abs(h[k].to_double() - oracle::classical_bernstein(n, k, t)));
        err_c = std::max(err_c, std::abs(b[k].to_double() - oracle::classical_bernstein(n, k, 0.5 + 0.5 * t, 0.5, 1.0)));
      }
    }
  }
  out.require(err_g <= 1e-12, "Gelfond-Bernstein error");
  out.require(err_c <= 1e-12, "Chebyshev-Bernstein error");
  // Weight on P_{i-1} at step n -> n+1 is i/(n+1), on both schemes.
  double err_w = 0.0;
  for (double a : {0.0, 0.3}) {
    const auto p = MuntzElement::scalar({0, 1, 2}, {0.0, 1.0, -1.0});
    const auto trace = run_elevation(p, ExponentSequence::classical(), {a, 1.0}, 10, kCtx);
    for (std::size_t j = 0; j < trace.steps.size(); ++j) {
      const std::size_t n = 2 + j;
      const auto& xi = trace.steps[j].xi;
      for (std::size_t i = 1; i <= n; ++i) {
        err_w = std::max(err_w, std::abs((1.0 - xi[i - 1]) - static_cast<double>(i) / static_cast<double>(n + 1)));
      }
    }
  }
  out.require(err_w <= 1e-12, "elevation weights");
  out.detail << "max errors " << err_g << ", " << err_c << ", weights " << err_w;
}

void identities(Outcome& out) {
  oracle::Gen gen(2);
  double prop1 = 0.0;
  double divdiff = 0.0;
  double split = 0.0;
  // Interior grid: the identities divide by powers of t.
  std::vector<double> ts;
  for (int j = 1; j <= 33; ++j) ts.push_back(static_cast<double>(j) / 34.0);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = gen.index(1, 8);
    const std::size_t k = gen.index(1, n);
    // The leading block of the split must itself be a real partition.
    auto r1 = gen.exponents(n);
    while (partition_from_exponents(r1)[k - 1] <= -1.0) r1 = gen.exponents(n);
    const std::vector<double> r0(r1.begin(), r1.end() - 1);
    const GelfondBernsteinBasis lo(r0);
    const GelfondBernsteinBasis hi(r1);
    const double top = r1.back();
    const auto eta = partition_from_exponents(r1);
    for (double t : ts) {
      const auto l = lo.values(t, kCtx);
      const auto h = hi.values(t, kCtx);
      for (std::size_t i = 0; i + 1 < r1.size(); ++i) {
        const double rhs = (top - r1[i]) / top * h[i].to_double() + r1[i + 1] / top * h[i + 1].to_double();
        prop1 = std::max(prop1, std::abs(l[i].to_double() - rhs));
      }
      divdiff = std::max(divdiff, divdiff_schur_identity_residual(r1, t, kExt));
      const ArgumentMultiset z{{1.0, k}};
      const ArgumentMultiset y{{t, n + 1 - k}};
      split = std::max(split, splitting_residual(eta, k, z, y, 1e-6, kExt).to_double());
    }
  }
  out.require(prop1 <= 1e-8, "dimension identity residual");
  out.require(divdiff <= 1e-8, "divided-difference/Schur residual");
  out.require(split <= 1e-8, "splitting residual");
  out.detail << "residuals " << prop1 << ", " << divdiff << ", splitting " << split;
}

void theorem4(Outcome& out) {
  const std::vector<double> r{0, 2, 4, 10};
  const double g2 = theorem4_gap(r, 1e-2, std::nullopt, kCtx);
  const double g3 = theorem4_gap(r, 1e-3, std::nullopt, kCtx);
  const double g4 = theorem4_gap(r, 1e-4, std::nullopt, kCtx);
  out.require(g2 > g3 && g3 > g4, "gaps not strictly decreasing");
  out.require(g4 < 0.2 * g2, "gap(1e-4) >= 0.2 gap(1e-2)");
  out.detail << "gaps " << g2 << ", " << g3 << ", " << g4;
}

void converges(Outcome& out, const std::string& name) {
  const auto& run = preset_run(name);
  out.require(run.trace.complete(), "run stopped early");
  const auto& rep = run.report;
  out.require(rep.distance_at(100) < 0.25 * rep.distance_at(10), "d(100) >= 0.25 d(10)");
  for (std::size_t j = 20; j < 100; j += 10) {
    out.require(rep.distance_at(j + 10) < rep.distance_at(j), "not decreasing at " + std::to_string(j));
  }
  out.detail << "d(10) " << rep.distance_at(10) << ", d(100) " << rep.distance_at(100);
}

void stalls(Outcome& out, const std::string& name) {
  const auto& run = preset_run(name);
  out.require(run.trace.complete(), "run stopped early");
  const auto& rep = run.report;
  out.require(rep.distance_at(100) >= 0.5 * rep.distance_at(20), "d(100) < 0.5 d(20)");
  out.detail << "d(20) " << rep.distance_at(20) << ", d(100) " << rep.distance_at(100);
}

void necessity(Outcome& out) {
  const auto& run = preset_run("necessity");
  out.require(run.trace.complete(), "run stopped early");
  const double a = run.initial.basis.interval.a;
  const auto d = run.curve.derivative(a);
  double slope = 0.0;
  for (double v : d) slope = std::max(slope, std::abs(v));
  out.require(slope > 1e-6, "P'(a) vanishes");
  const auto legs = first_leg_series(run.trace);
  const std::size_t n0 = run.initial.size() - 1;
  const double base = legs.at(20 - n0);
  double lowest = base;
  for (std::size_t m = 20; m <= 100; ++m) lowest = std::min(lowest, legs.at(m - n0));
  out.require(lowest >= 0.5 * base, "first leg dropped below half");
  out.detail << "leg(20) " << base << ", min " << lowest;
}

void corner_cutting(Outcome& out) {
  const double tol = 1e-9;
  double lo = 0.0;
  double hi = 0.0;
  double residual = 0.0;
  for (const auto& name : preset_names()) {
    const auto& trace = preset_run(name).trace;
    for (std::size_t j = 0; j + 1 < trace.polygons.size(); ++j) {
      const auto rec = recover_corner_cut(trace.polygons[j].points, trace.polygons[j + 1].points);
      for (double x : rec.xi) {
        lo = std::min(lo, x);
        hi = std::max(hi, x);
      }
      residual = std::max(residual, rec.max_residual);
    }
  }
  out.require(lo >= -tol && hi <= 1.0 + tol, "recovered weight outside [0,1]");
  double row_err = 0.0;
  double entry_lo = 0.0;
  double entry_hi = 0.0;
  for (const auto& name : preset_names()) {
    const auto preset = preset_by_name(name);
    const double a = preset.interval.a > 0.0 ? preset.interval.a : 0.2;
    for (std::size_t m : {preset.control_points.size() - 1, std::size_t{10}, std::size_t{20}, std::size_t{40}}) {
      const auto s = restriction_matrix(preset.sequence.materialize(m), a, kCtx);
      for (std::size_t i = 0; i < s.rows(); ++i) {
        double sum = 0.0;
        for (std::size_t j = 0; j < s.cols(); ++j) {
          entry_lo = std::min(entry_lo, s(i, j));
          entry_hi = std::max(entry_hi, s(i, j));
          sum += s(i, j);
        }
        row_err = std::max(row_err, std::abs(sum - 1.0));
      }
    }
  }
  out.require(entry_lo >= -tol && entry_hi <= 1.0 + tol, "restriction entry outside [0,1]");
  out.require(row_err <= tol, "restriction row sum");
  out.detail << "xi in [" << lo << ", " << hi << "], segment residual " << residual << ", row sum error "
             << row_err;
}

void invariance(Outcome& out) {
  double worst = 0.0;
  for (const auto& name : preset_names()) {
    const auto& run = preset_run(name);
    const double a = run.initial.basis.interval.a;
    const auto ts = linspace(a, 1.0, 17);
    double scale = 0.0;
    for (double t : ts) {
      for (double v : run.curve.value(t)) scale = std::max(scale, std::abs(v));
    }
    for (std::size_t j : {1, 10, 50, 100}) {
      const auto* poly = run.trace.polygon_at(j);
      if (poly == nullptr) {
        out.require(false, name + " iteration " + std::to_string(j) + " not stored");
        continue;
      }
      const auto vals = evaluate_polygon(*poly, ts, kExt);
      for (std::size_t i = 0; i < ts.size(); ++i) {
        const auto ref = run.curve.value(ts[i]);
        for (std::size_t c = 0; c < ref.size(); ++c) worst = std::max(worst, std::abs(vals[i][c] - ref[c]) / scale);
      }
    }
  }
  out.require(worst <= 1e-8, "relative error");
  out.detail << "max relative error " << worst;
}

void trends(Outcome& out) {
  const auto fig3 = figure_preset(3).sequence;
  double prev7 = 1e300;
  double prev8 = 1e300;
  std::ostringstream series;
  for (std::size_t m : {10, 20, 40, 80}) {
    const auto r = fig3.materialize(m);
    const double g7 = theorem7_gap(r, 0.2, 3, kCtx);
    const double g8 = node_max_gap(r, {0.2, 1.0}, kCtx);
    out.require(g7 < prev7, "theorem 7 gap not decreasing at m=" + std::to_string(m));
    out.require(g8 < prev8, "node gap not decreasing at m=" + std::to_string(m));
    prev7 = g7;
    prev8 = g8;
  }
  const auto fig2 = figure_preset(2).sequence;
  const double n10 = node_max_gap(fig2.materialize(10), {0.0, 1.0}, kCtx);
  const double n80 = node_max_gap(fig2.materialize(80), {0.0, 1.0}, kCtx);
  out.require(n80 > 0.5 * n10, "non-Muntz node gap closed");
  out.detail << "fig3 gaps at m=80 " << prev7 << ", " << prev8 << "; fig2 node gap " << n10 << " -> " << n80;
}

void oracles(Outcome& out) {
  oracle::Gen gen(10);
  double schur_err = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = gen.index(1, 6);
    const auto lambda = partition_from_exponents(gen.exponents(n - 1, 0.2, 2.0));
    std::vector<SchurArgument> entries;
    std::vector<Real> jittered;
    std::size_t left = n;
    double base = gen.uniform(0.3, 0.6);
    while (left > 0) {
      const std::size_t m = gen.index(1, left);
      entries.push_back({Real(base, 256), m});
      for (std::size_t s = 0; s < m; ++s) jittered.emplace_back(base * (1.0 + 1e-7 * (static_cast<double>(s) - 0.5 * static_cast<double>(m - 1))), oracle::kBits);
      left -= m;
      base += gen.uniform(0.2, 0.5);
    }
    const double fast = schur_eval(lambda, ArgumentMultiset(entries), kExt).value.to_double();
    const double direct = oracle::schur_direct(lambda.shifted_exponents(), jittered).to_double();
    schur_err = std::max(schur_err, std::abs(fast - direct) / std::abs(direct));
  }
  double cp_err = 0.0;
  for (int trial = 0; trial < 30; ++trial) {
    const auto r = gen.exponents(gen.index(1, 6), 0.4, 2.5);
    const bool gelfond = trial % 2 == 0;
    const double a = gelfond ? 0.0 : gen.uniform(0.1, 0.7);
    std::vector<double> coeffs(r.size());
    for (double& c : coeffs) c = gen.uniform(-1.0, 1.0);
    const auto kind = gelfond ? BasisKind::gelfond() : BasisKind::chebyshev({a, 1.0});
    const auto poly = control_points(MuntzElement::scalar(r, coeffs), r, kind, kCtx);
    const auto expect = oracle::hermite_control_points(r, a, 1.0, coeffs);
    for (std::size_t i = 0; i < r.size(); ++i) cp_err = std::max(cp_err, std::abs(poly.points[i][0] - expect[i]));
  }
  out.require(schur_err <= 1e-6, "Schur relative error");
  out.require(cp_err <= 1e-9, "control point error");
  out.detail << "schur rel " << schur_err << ", control points " << cp_err;
}

}  // namespace

int main() {
  criterion(1, "classical reduction", 5.0, classical_reduction);
  criterion(2, "identity residuals", 30.0, identities);
  criterion(3, "Gelfond limit refinement", 10.0, theorem4);
  criterion(4, "fig1 convergence", 120.0, [](Outcome& o) { converges(o, "fig1"); });
  criterion(4, "fig3 convergence", 120.0, [](Outcome& o) { converges(o, "fig3"); });
  criterion(5, "fig2 non-convergence", 120.0, [](Outcome& o) { stalls(o, "fig2"); });
  criterion(5, "fig4 non-convergence", 120.0, [](Outcome& o) { stalls(o, "fig4"); });
  criterion(6, "necessity witness", 120.0, necessity);
  criterion(7, "corner-cutting structure", 0.0, corner_cutting);
  criterion(8, "curve invariance", 0.0, invariance);
  criterion(9, "gap trends", 0.0, trends);
  criterion(10, "oracle equivalence", 0.0, oracles);
  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
