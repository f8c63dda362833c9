#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstring>

#include "mityuk/analysis.hpp"
#include "mityuk/error.hpp"

using namespace mityuk;

namespace {

Region annulus(int n) { return Region::from_curves(circle_curve(0.0, 1.0), {circle_curve(0.0, 0.25)}, n); }

// f = -(x^2 - 1/4)^2 - y^2: maxima at (+-1/2, 0), saddle at the origin.
double two_bumps(Complex z) {
  const double a = z.real() * z.real() - 0.25;
  return 2.0 - a * a - z.imag() * z.imag();
}

ScalarField synthetic_field(int nx, int ny) {
  ScalarField f;
  f.grid = GridSpec{nx, ny, -1.0, 1.0, -0.8, 0.8};
  f.values.resize(static_cast<std::size_t>(nx) * ny);
  f.mask.assign(f.values.size(), Mask::interior);
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) f.values[f.index(i, j)] = two_bumps(f.grid.point(i, j));
  return f;
}

std::vector<ProbeSample> samples(double power, int count) {
  std::vector<ProbeSample> s;
  for (int k = 0; k < count; ++k) {
    const double d = std::pow(10.0, -0.5 * k);
    s.push_back({Complex(d, 0.0), d, std::pow(d, power), 512, 0.0});
  }
  return s;
}

}  // namespace

TEST_CASE("sweep is deterministic across worker counts") {
  const Region r = annulus(128);
  RadiusEvaluator ev(r, SlitSpec::radial(1));
  const GridSpec g = GridSpec::covering(r, 23, 19);
  SweepOptions one, three;
  one.workers = 1;
  three.workers = 3;
  const ScalarField a = sweep(ev, g, one), b = sweep(ev, g, three);
  REQUIRE(a.values.size() == b.values.size());
  CHECK(std::memcmp(a.values.data(), b.values.data(), a.values.size() * sizeof(double)) == 0);
  CHECK(a.mask == b.mask);
}

TEST_CASE("disk sweep equals 1 - |alpha|^2") {
  const Region r = Region::from_curves(circle_curve(0.0, 1.0), {}, 128);
  RadiusEvaluator ev(r, SlitSpec::circular(0));
  const ScalarField f = sweep(ev, GridSpec::covering(r, 31, 31));
  int interior = 0;
  for (int j = 0; j < 31; ++j) {
    for (int i = 0; i < 31; ++i) {
      if (!f.valid(i, j)) continue;
      ++interior;
      CHECK(std::abs(f.at(i, j) - (1.0 - std::norm(f.grid.point(i, j)))) <= 1e-8);
    }
  }
  CHECK(interior > 400);
}

TEST_CASE("annulus sweep is invariant under quarter turns") {
  const Region r = annulus(256);
  RadiusEvaluator ev(r, SlitSpec::circular(1));
  const int n = 41;
  const ScalarField f = sweep(ev, GridSpec::covering(r, n, n));
  int compared = 0;
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      // (x, y) -> (-y, x)
      const int i2 = n - 1 - j, j2 = i;
      if (!f.valid(i, j) || !f.valid(i2, j2)) continue;
      CHECK(std::abs(f.at(i, j) - f.at(i2, j2)) <= 1e-8);
      ++compared;
    }
  }
  CHECK(compared > 500);
}

TEST_CASE("three-circles field is finite and positive, masks are consistent") {
  const Region r = Region::from_curves(circle_curve(0.0, 3.0), {circle_curve(1.5, 1.0), circle_curve(-1.5, 1.0)}, 256);
  RadiusEvaluator ev(r, SlitSpec::circular(2));
  const ScalarField f = sweep(ev, GridSpec::covering(r, 25, 25));
  int interior = 0, holes = 0;
  for (std::size_t k = 0; k < f.values.size(); ++k) {
    if (f.mask[k] == Mask::interior) {
      ++interior;
      CHECK(std::isfinite(f.values[k]));
      CHECK(f.values[k] > 0.0);
    } else {
      CHECK(std::isnan(f.values[k]));
      holes += f.mask[k] == Mask::exterior;
    }
  }
  CHECK(interior > 100);
  CHECK(holes > 100);
}

TEST_CASE("sweep_direct matches the evaluator sweep") {
  const Region r = Region::from_curves(circle_curve(0.0, 1.0), {circle_curve(0.5, 0.25)}, 128);
  const SlitSpec s = SlitSpec::radial(1);
  RadiusEvaluator ev(r, s);
  const GridSpec g = GridSpec::covering(r, 9, 9);
  const ScalarField a = sweep(ev, g);
  SolverConfig iter;
  iter.method = SolverMethod::iterative;
  const ScalarField b = sweep_direct(r, s, g, iter);
  CHECK(a.mask == b.mask);
  for (std::size_t k = 0; k < a.values.size(); ++k)
    if (a.mask[k] == Mask::interior) CHECK(std::abs(a.values[k] - b.values[k]) <= 1e-10 * a.values[k]);
}

TEST_CASE("critical points of a synthetic field") {
  const ScalarField f = synthetic_field(41, 33);
  const RadiusFunction fn = [](std::span<const Complex> pts) {
    std::vector<double> v;
    for (Complex z : pts) v.push_back(two_bumps(z));
    return v;
  };
  const CriticalReport rep = find_critical_points(f, &fn);
  CHECK(rep.n_max == 2);
  CHECK(rep.n_saddle == 1);
  CHECK(rep.n_min == 0);
  CHECK_FALSE(rep.non_isolated);
  for (const CriticalPoint& p : rep.points) {
    const Complex expected = p.kind == CriticalKind::saddle ? Complex(0.0, 0.0)
                                                              : Complex(p.location.real() > 0 ? 0.5 : -0.5, 0.0);
    CHECK(std::abs(p.location - expected) < 1e-6);
    if (p.kind == CriticalKind::maximum) {
      CHECK(p.hessian_eigs[0] < 0.0);
      CHECK(p.hessian_eigs[1] < 0.0);
    } else {
      CHECK(p.hessian_eigs[0] * p.hessian_eigs[1] < 0.0);
    }
  }
  const MorseReport m = morse_check(rep, 2);
  CHECK(m.difference == 1);
  CHECK_FALSE(m.pass);
  CHECK(morse_check(rep, 0).pass);

  CriticalOptions coarse;
  coarse.refine = Refine::none;
  const CriticalReport raw = find_critical_points(f, nullptr, coarse);
  CHECK(raw.n_max == 2);
}

TEST_CASE("annulus ring is reported as non-isolated") {
  const Region r = annulus(256);
  RadiusEvaluator ev(r, SlitSpec::circular(1));
  const ScalarField f = sweep(ev, GridSpec::covering(r, 41, 41));
  const RadiusFunction fn = radius_function(ev);
  const CriticalReport rep = find_critical_points(f, &fn);
  CHECK(rep.non_isolated);
  CHECK(rep.n_max == 0);
  CHECK(rep.n_saddle == 0);
  for (const CriticalPoint& p : rep.degenerate) CHECK(std::abs(std::abs(p.location) - 0.5) < 0.03);
  CHECK_FALSE(morse_check(rep, 1).pass);
}

TEST_CASE("two circles, circular slit: one maximum and one saddle") {
  const Region r = Region::from_curves(circle_curve(0.0, 1.0), {circle_curve(0.5, 0.25)}, 256);
  RadiusEvaluator ev(r, SlitSpec::circular(1));
  const ScalarField f = sweep(ev, GridSpec::covering(r, 61, 61));
  const RadiusFunction fn = radius_function(ev);
  const CriticalReport rep = find_critical_points(f, &fn);
  CHECK(rep.n_max == 1);
  CHECK(rep.n_saddle == 1);
  CHECK(morse_check(rep, 1).pass);
}

TEST_CASE("doubly connected radial slit has no critical points") {
  const Region r = Region::from_curves(circle_curve(0.0, 1.0), {circle_curve(0.5, 0.25)}, 256);
  RadiusEvaluator ev(r, SlitSpec::radial(1));
  const ScalarField f = sweep(ev, GridSpec::covering(r, 61, 61));
  const RadiusFunction fn = radius_function(ev);
  const CriticalReport rep = find_critical_points(f, &fn);
  CHECK(rep.points.empty());
  const MorseReport m = morse_check(rep, 1);
  CHECK(m.pass);
  CHECK_FALSE(m.notes.empty());
}

TEST_CASE("trend classification") {
  ProbeOptions o;
  CHECK(classify_trend(samples(1.0, 10), 1.0, o) == Trend::to_zero);
  CHECK(classify_trend(samples(-1.0, 10), 1.0, o) == Trend::to_infinity);
  CHECK(classify_trend(samples(0.0, 10), 1.0, o) == Trend::finite);
  CHECK(classify_trend(samples(0.1, 10), 1.0, o) == Trend::finite);
  double slope = 0.0;
  classify_trend(samples(2.0, 6), 1.0, o, &slope);
  CHECK(slope == doctest::Approx(2.0));
}

TEST_CASE("trend is stable under subsampling") {
  ProbeOptions o;
  for (double p : {1.0, -1.0, 0.0}) {
    const std::vector<ProbeSample> all = samples(p, 16);
    std::vector<ProbeSample> half;
    for (std::size_t k = 1; k < all.size(); k += 2) half.push_back(all[k]);
    CHECK(classify_trend(all, 1.0, o) == classify_trend(half, 1.0, o));
  }
}

TEST_CASE("directional combination") {
  ProbeResult a, b;
  a.trend = b.trend = Trend::finite;
  a.samples = {{0.0, 0.1, 1.0, 512, 0.0}};
  b.samples = {{0.0, 0.1, 1.05, 512, 0.0}};
  CHECK(combine_directional(a, b) == Trend::finite);
  b.samples[0].R = 1.5;
  CHECK(combine_directional(a, b) == Trend::divergent_directional);
  a.trend = b.trend = Trend::to_zero;
  CHECK(combine_directional(a, b) == Trend::to_zero);
  b.trend = Trend::to_infinity;
  CHECK(combine_directional(a, b) == Trend::divergent_directional);
}

TEST_CASE("probe paths") {
  const ProbePath p = make_probe_path(0.6, 1.0, 5, 1e-4, "x");
  REQUIRE(p.points.size() == 5);
  CHECK(std::abs(p.points.front() - 0.6) < 1e-15);
  CHECK(std::abs(p.points.back() - (1.0 - 1e-4)) < 1e-15);
  for (int k = 1; k < 5; ++k) CHECK(std::abs(p.points[k] - 1.0) < std::abs(p.points[k - 1] - 1.0));
  CHECK_THROWS_AS(make_probe_path(0.6, 1.0, 1, 1e-4), Error);
  CHECK_THROWS_AS(make_probe_path(0.6, 1.0, 5, 0.5), Error);
}

TEST_CASE("annulus probes") {
  const Region r = annulus(512);
  ProbeOptions o;
  const ProbePath outer = make_probe_path(0.6, 1.0, 10, 1e-4, "outer");
  const ProbePath inner = make_probe_path(0.5, 0.25, 10, 1e-4, "inner");
  CHECK(boundary_probe(r, SlitSpec::circular(1), outer, o).trend == Trend::to_zero);
  CHECK(boundary_probe(r, SlitSpec::radial(1), outer, o).trend == Trend::to_zero);
  CHECK(boundary_probe(r, SlitSpec::circular(1), inner, o).trend == Trend::to_zero);
  const ProbeResult rad = boundary_probe(r, SlitSpec::radial(1), inner, o);
  CHECK(rad.trend == Trend::to_infinity);
  CHECK_FALSE(rad.truncated);
  for (const ProbeSample& s : rad.samples) CHECK(s.change < o.accept_tol);
}

TEST_CASE("probe truncates when it leaves the domain") {
  const Region r = annulus(256);
  const ProbePath p = make_probe_path(0.6, 1.2, 6, 1e-3, "out");
  const ProbeResult res = boundary_probe(r, SlitSpec::circular(1), p);
  CHECK(res.truncated);
  CHECK(res.samples.size() < 6);
}

TEST_CASE("lower bound check") {
  const Region r = Region::from_curves(circle_curve(0.0, 1.0), {}, 128);
  RadiusEvaluator ev(r, SlitSpec::circular(0));
  ScalarField f = sweep(ev, GridSpec::covering(r, 21, 21));
  const BoundReport b = lower_bound_check(f, r);
  CHECK(b.checked > 150);
  CHECK(b.violations.empty());
  CHECK(b.min_margin >= -1e-12);
  CHECK(b.min_margin < 0.05);

  for (double& v : f.values) v *= 0.5;
  CHECK_FALSE(lower_bound_check(f, r).violations.empty());
}

TEST_CASE("grid validation") {
  CHECK_THROWS_AS((GridSpec{2, 10}.validate()), Error);
  CHECK_THROWS_AS((GridSpec{10, 10, 1.0, 0.0}.validate()), Error);
  const GridSpec g{11, 5, 0.0, 1.0, -1.0, 1.0};
  CHECK(std::abs(g.point(10, 4) - Complex(1.0, 1.0)) < 1e-15);
  CHECK(g.dx() == doctest::Approx(0.1));
}
