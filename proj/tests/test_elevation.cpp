#include <catch_amalgamated.hpp>

#include "muntz/diagnostics.hpp"
#include "muntz/elevation.hpp"
#include "muntz/errors.hpp"
#include "oracles.hpp"

using namespace muntz;
using Catch::Matchers::WithinAbs;

namespace {

const PrecisionContext kCtx;

ControlPolygon gelfond_polygon(std::vector<Point> pts, std::vector<double> r) {
  return {std::move(pts), std::move(r), BasisKind::gelfond()};
}

double max_diff(const std::vector<Point>& x, const std::vector<Point>& y) {
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t c = 0; c < x[i].size(); ++c) d = std::max(d, std::abs(x[i][c] - y[i][c]));
  }
  return d;
}

std::vector<Point> random_points(oracle::Gen& gen, std::size_t count, std::size_t dim) {
  std::vector<Point> pts(count, Point(dim));
  for (auto& p : pts) {
    for (double& v : p) v = gen.uniform(-3.0, 3.0);
  }
  return pts;
}

}  // namespace

TEST_CASE("explicit step over [0,1]") {
  const auto q = elevate_gelfond_step(gelfond_polygon({{0.0}, {1.0}}, {0, 1}), 2.0);
  REQUIRE(q.size() == 3);
  CHECK(q.points[1][0] == 0.5);
  CHECK(q.points[2][0] == 1.0);
  CHECK(q.exponents == std::vector<double>{0, 1, 2});

  const auto c = elevate_gelfond_step(gelfond_polygon({{2.0}, {2.0}, {2.0}}, {0, 1, 3}), 4.0);
  for (const auto& p : c.points) CHECK(p[0] == 2.0);

  // Fig. 1 prefix, next exponent 8: weight r_i / 8 on P_{i-1}.
  const auto quad = default_quadrilateral();
  const auto f = elevate_gelfond_step(gelfond_polygon(quad, {0, 1, 2, 3}), 8.0);
  const auto rec = recover_corner_cut(quad, f.points);
  CHECK_THAT(rec.xi[0], WithinAbs(7.0 / 8, 1e-15));
  CHECK_THAT(rec.xi[1], WithinAbs(6.0 / 8, 1e-15));
  CHECK_THAT(rec.xi[2], WithinAbs(5.0 / 8, 1e-15));

  CHECK_THROWS_AS(elevate_gelfond_step(gelfond_polygon(quad, {0, 1, 2, 3}), 3.0), MonotonicityError);
  ControlPolygon cheb{quad, {0, 1, 2, 3}, BasisKind::chebyshev({0.5, 1.0})};
  CHECK_THROWS_AS(elevate_gelfond_step(cheb, 4.0), DomainError);
}

TEST_CASE("interval step reduces to the classical scheme") {
  for (double a : {0.1, 0.5}) {
    ControlPolygon p{{{0.0, 1.0}, {2.0, -1.0}, {3.0, 0.5}}, {0, 1, 2}, BasisKind::chebyshev({a, 1.0})};
    const auto [q, step] = elevate_interval_step(p, 3.0, kCtx);
    REQUIRE(step.xi.size() == 2);
    // xi_i = 1 - i/(n+1) with n = 2.
    CHECK_THAT(step.xi[0], WithinAbs(2.0 / 3, 1e-12));
    CHECK_THAT(step.xi[1], WithinAbs(1.0 / 3, 1e-12));
    CHECK(max_diff(q.points, oracle::classical_elevate(p.points)) <= 1e-12);
  }
  ControlPolygon flat{{{1.5}, {1.5}, {1.5}}, {0, 2, 4}, BasisKind::chebyshev({0.3, 1.0})};
  const auto [q, step] = elevate_interval_step(flat, 10.0, kCtx);
  for (const auto& pt : q.points) CHECK_THAT(pt[0], WithinAbs(1.5, 1e-13));
  CHECK_THROWS_AS(elevate_interval_step(gelfond_polygon({{0.0}, {1.0}}, {0, 1}), 2.0, kCtx), DomainError);
}

TEST_CASE("interval weights approach the [0,1] weights as a shrinks") {
  const std::vector<double> r{0, 2, 4, 10};
  ControlPolygon base{default_quadrilateral(), r, BasisKind::gelfond()};
  std::vector<double> previous(3, 1e300);
  for (double a : {1e-1, 1e-2, 1e-3}) {
    ControlPolygon p{default_quadrilateral(), r, BasisKind::chebyshev({a, 1.0})};
    const auto step = elevate_interval_step(p, 13.0, kCtx).second;
    for (std::size_t i = 1; i <= 3; ++i) {
      const double diff = std::abs(step.xi[i - 1] - (1.0 - r[i] / 13.0));
      CHECK(diff < previous[i - 1]);
      previous[i - 1] = diff;
    }
  }
  for (double d : previous) CHECK(d <= 1e-2);
}

TEST_CASE("restriction matrices") {
  const auto s = restriction_matrix({0, 1}, 0.3, kCtx);
  CHECK_THAT(s(0, 0), WithinAbs(0.7, 1e-14));
  CHECK_THAT(s(0, 1), WithinAbs(0.3, 1e-14));
  CHECK_THAT(s(1, 0), WithinAbs(0.0, 1e-14));
  CHECK_THAT(s(1, 1), WithinAbs(1.0, 1e-14));

  const std::vector<double> r{0, 2, 4, 10, 13};
  const auto m = restriction_matrix(r, 0.4, kCtx);
  for (std::size_t i = 0; i < r.size(); ++i) {
    double sum = 0.0;
    for (std::size_t j = 0; j < r.size(); ++j) {
      CHECK(m(i, j) >= -kCtx.residual_tolerance);
      sum += m(i, j);
    }
    CHECK_THAT(sum, WithinAbs(1.0, kCtx.residual_tolerance));
  }
  const auto near = restriction_matrix(r, 1e-6, kCtx);
  for (std::size_t i = 0; i < r.size(); ++i) {
    for (std::size_t j = 0; j < r.size(); ++j) CHECK_THAT(near(i, j), WithinAbs(i == j ? 1.0 : 0.0, 1e-4));
  }
  CHECK_THROWS_AS(restriction_matrix(r, 0.0, kCtx), DomainError);
  CHECK_THROWS_AS(restriction_matrix(r, 1.0, kCtx), DomainError);
}

TEST_CASE("iterated elevation of the first figure") {
  const auto run = figure_experiment(1, 100, kCtx);
  const auto& trace = run.trace;
  CHECK(trace.complete());
  CHECK(trace.completed_iterations() == 100);
  CHECK(trace.polygons.size() == 101);
  CHECK(trace.final_polygon().size() == 104);
  CHECK(trace.metrics.size() == 101);
  CHECK(trace.first_legs.size() == 101);
  CHECK(trace.final_polygon().points.front() == Point{0.0, 0.0});
  CHECK(trace.final_polygon().points.back() == Point{4.0, 0.0});
  const auto preset = figure_preset(1);
  const auto& p0 = run.initial;
  CHECK_THROWS_AS(run_elevation(p0, preset.sequence, 0, kCtx), ValidationError);
  const ControlPolygon wrong{p0.points, {0, 1, 2, 4}, p0.basis};
  CHECK_THROWS_AS(run_elevation(wrong, preset.sequence, 3, kCtx), ValidationError);
}

TEST_CASE("stored iterations") {
  CHECK(stores_iteration(0, 256));
  CHECK(stores_iteration(255, 256));
  CHECK(stores_iteration(0, 300));
  CHECK(stores_iteration(8, 300));
  CHECK_FALSE(stores_iteration(9, 300));
  CHECK(stores_iteration(300, 300));
  const auto trace = run_elevation(MuntzElement::scalar({0, 1}, {0.0, 1.0}), ExponentSequence::classical(),
                                   {0.0, 1.0}, 300, kCtx);
  CHECK(trace.complete());
  for (std::size_t k = 0; k < trace.stored_iterations.size(); ++k) {
    const std::size_t j = trace.stored_iterations[k];
    CHECK(stores_iteration(j, 300));
    CHECK(trace.polygon_at(j) == &trace.polygons[k]);
  }
  CHECK(trace.stored_iterations.back() == 300);
  CHECK(trace.polygon_at(9) == nullptr);
}

TEST_CASE("property: constant curves stay constant") {
  oracle::Gen gen(51);
  for (int trial = 0; trial < 10; ++trial) {
    const double c = gen.uniform(-5.0, 5.0);
    const double a = trial % 2 == 0 ? 0.0 : gen.uniform(0.1, 0.6);
    const auto r = gen.exponents(3);
    const auto seq = ExponentSequence::affine(r, 1.0, r.back());
    const auto trace = run_elevation(MuntzElement::scalar(r, {c, 0.0, 0.0, 0.0}), seq, {a, 1.0}, 10, kCtx);
    for (const auto& pt : trace.final_polygon().points) CHECK_THAT(pt[0], WithinAbs(c, 1e-10));
  }
}

TEST_CASE("property: every step is a corner cut that keeps the ends and the curve") {
  oracle::Gen gen(52);
  for (int trial = 0; trial < 12; ++trial) {
    const std::size_t n = gen.index(1, 4);
    const auto r = gen.exponents(n);
    const auto seq = ExponentSequence::affine(r, gen.uniform(0.5, 2.0), r.back());
    const double a = trial % 2 == 0 ? 0.0 : gen.uniform(0.1, 0.7);
    const BasisKind kind = a == 0.0 ? BasisKind::gelfond() : BasisKind::chebyshev({a, 1.0});
    const ControlPolygon initial{random_points(gen, n + 1, 2), r, kind};
    const std::size_t iters = 12;
    const auto trace = run_elevation(initial, seq, iters, kCtx);
    REQUIRE(trace.complete());
    for (std::size_t j = 0; j < iters; ++j) {
      const auto& before = trace.polygons[j].points;
      const auto& after = trace.polygons[j + 1].points;
      CHECK(after.front() == before.front());
      CHECK(after.back() == before.back());
      const auto rec = recover_corner_cut(before, after);
      CHECK(rec.max_residual <= 1e-9);
      for (std::size_t i = 0; i < rec.xi.size(); ++i) {
        CHECK(rec.xi[i] >= -kCtx.residual_tolerance);
        CHECK(rec.xi[i] <= 1.0 + kCtx.residual_tolerance);
        CHECK_THAT(rec.xi[i], WithinAbs(trace.steps[j].xi[i], 1e-8));
      }
    }
    // The represented curve does not move.
    const auto& last = trace.final_polygon();
    for (double t : {a, 0.5 * (a + 1.0), 0.9, 1.0}) {
      const auto p0 = evaluate_polygon(initial, t, kCtx);
      const auto pj = evaluate_polygon(last, t, kCtx);
      for (std::size_t c = 0; c < p0.size(); ++c) CHECK_THAT(pj[c], WithinAbs(p0[c], 1e-9));
    }
  }
}

TEST_CASE("property: restriction commutes with elevation") {
  oracle::Gen gen(53);
  for (int trial = 0; trial < 6; ++trial) {
    const auto r = gen.exponents(3);
    const auto seq = ExponentSequence::affine(r, gen.uniform(0.5, 2.0), r.back());
    const double a = gen.uniform(0.1, 0.6);
    const auto quad = default_quadrilateral();
    const auto s0 = restriction_matrix(r, a, kCtx);
    std::vector<Point> restricted(4, Point(2, 0.0));
    for (std::size_t i = 0; i < 4; ++i) {
      for (std::size_t j = 0; j < 4; ++j) {
        for (std::size_t c = 0; c < 2; ++c) restricted[i][c] += s0(i, j) * quad[j][c];
      }
    }
    const std::size_t iters = 8;
    const auto over01 = run_elevation(ControlPolygon{quad, r, BasisKind::gelfond()}, seq, iters, kCtx);
    const auto overa =
        run_elevation(ControlPolygon{restricted, r, BasisKind::chebyshev({a, 1.0})}, seq, iters, kCtx);
    const auto& top = over01.final_polygon();
    const auto sm = restriction_matrix(top.exponents, a, kCtx);
    std::vector<Point> mapped(top.size(), Point(2, 0.0));
    for (std::size_t i = 0; i < top.size(); ++i) {
      for (std::size_t j = 0; j < top.size(); ++j) {
        for (std::size_t c = 0; c < 2; ++c) mapped[i][c] += sm(i, j) * top.points[j][c];
      }
    }
    CHECK(max_diff(mapped, overa.final_polygon().points) <= 1e-9);
  }
}
