#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "mityuk/error.hpp"
#include "mityuk/geometry.hpp"

using namespace mityuk;

namespace {

DomainGeometry annulus(int n) {
  return assemble_domain(make_circle(0.0, 1.0, Orientation::ccw, n),
                         {make_circle(0.0, 0.25, Orientation::cw, n)});
}

std::string code_of(const auto& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return "";
}

}  // namespace

TEST_CASE("unit circle nodes") {
  const ParamBoundary b = make_circle(0.0, 1.0, Orientation::ccw, 8);
  const Complex expected[] = {1.0, Complex(0, 1), -1.0, Complex(0, -1)};
  for (int k = 0; k < 4; ++k) CHECK(std::abs(b.nodes[2 * k] - expected[k]) < 1e-15);
  CHECK(signed_area(b.nodes) > 0.0);
  CHECK(signed_area(make_circle(1.5, 1.0, Orientation::cw, 16).nodes) < 0.0);
}

TEST_CASE("circle argument checks") {
  CHECK(code_of([] { make_circle(0.0, -1.0, Orientation::ccw, 16); }) == "invalid-geometry");
  CHECK(code_of([] { make_circle(0.0, 1.0, Orientation::ccw, 15); }) == "invalid-node-count");
  CHECK(code_of([] { make_circle(0.0, 1.0, Orientation::ccw, 6); }) == "invalid-node-count");
}

TEST_CASE("smooth curve from trig functions equals make_circle") {
  const auto fn = [](double t) {
    return CurvePoint{Complex(std::cos(t), std::sin(t)), Complex(-std::sin(t), std::cos(t)),
                      Complex(-std::cos(t), -std::sin(t))};
  };
  const ParamBoundary a = make_smooth_curve(fn, Orientation::ccw, 64);
  const ParamBoundary b = make_circle(0.0, 1.0, Orientation::ccw, 64);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(std::abs(a.nodes[i] - b.nodes[i]) < 1e-15);
    CHECK(std::abs(a.first_derivs[i] - b.first_derivs[i]) < 1e-15);
  }
}

TEST_CASE("ellipse winds once") {
  const auto fn = [](double t) {
    return CurvePoint{Complex(2 * std::cos(t), std::sin(t)), Complex(-2 * std::sin(t), std::cos(t)),
                      Complex(-2 * std::cos(t), -std::sin(t))};
  };
  CHECK(winding_number(make_smooth_curve(fn, Orientation::ccw, 64).nodes, 0.3) == 1);
  CHECK(winding_number(make_smooth_curve(fn, Orientation::cw, 64).nodes, 0.3) == -1);
  CHECK(winding_number(make_smooth_curve(fn, Orientation::ccw, 64).nodes, 3.0) == 0);
}

TEST_CASE("vanishing derivative is rejected") {
  const auto fn = [](double t) {
    return CurvePoint{Complex(std::cos(t), std::sin(t)), Complex(0.0, 0.0), Complex(0.0, 0.0)};
  };
  CHECK(code_of([&] { make_smooth_curve(fn, Orientation::ccw, 16); }) == "degenerate-parametrization");
}

TEST_CASE("polygon grading puts zero derivatives at the corners") {
  const std::vector<Complex> sq{{-1, -1}, {1, -1}, {1, 1}, {-1, 1}};
  const ParamBoundary b = make_polygon(sq, Orientation::ccw, 64, {{}, 3});
  int corners = 0;
  for (std::size_t i = 0; i < b.size(); ++i) {
    if (b.is_graded_corner(i)) {
      ++corners;
      bool at_vertex = false;
      for (Complex v : sq) at_vertex |= std::abs(b.nodes[i] - v) < 1e-14;
      CHECK(at_vertex);
    }
  }
  CHECK(corners == 4);
  CHECK(signed_area(b.nodes) == doctest::Approx(4.0).epsilon(1e-2));
}

TEST_CASE("polygon node spacing near a corner follows the grading order") {
  const std::vector<Complex> sq{{-1, -1}, {1, -1}, {1, 1}, {-1, 1}};
  for (int p : {3, 5}) {
    const ParamBoundary b = make_polygon(sq, Orientation::ccw, 1024, {{}, p});
    std::size_t c = 0;
    while (!b.is_graded_corner(c)) ++c;
    const double d1 = std::abs(b.nodes[(c + 1) % b.size()] - b.nodes[c]);
    const double d2 = std::abs(b.nodes[(c + 2) % b.size()] - b.nodes[c]);
    CHECK(std::log2(d2 / d1) == doctest::Approx(p).epsilon(0.05));
  }
}

TEST_CASE("polygon errors") {
  CHECK(code_of([] { make_polygon({0.0, 1.0}, Orientation::ccw, 16); }) == "invalid-geometry");
  CHECK(code_of([] {
          make_polygon({0.0, Complex(1, 1), Complex(1, 0), Complex(0, 1)}, Orientation::ccw, 16);
        }) == "invalid-geometry");
  CHECK(code_of([] { make_polygon({0.0, 1.0, Complex(0, 1)}, Orientation::ccw, 16, {{}, 1}); }) ==
        "invalid-grading");
}

TEST_CASE("assemble_domain orientation and containment") {
  const DomainGeometry d = assemble_domain(make_circle(0.0, 1.0, Orientation::cw, 32),
                                           {make_circle(0.0, 0.25, Orientation::ccw, 32)});
  CHECK(signed_area(d.boundaries[0].nodes) > 0.0);
  CHECK(signed_area(d.boundaries[1].nodes) < 0.0);
  CHECK(d.ell() == 1);
  CHECK(assemble_domain(make_circle(0.0, 1.0, Orientation::ccw, 32), {}).ell() == 0);

  const DomainGeometry three = assemble_domain(make_circle(0.0, 3.0, Orientation::ccw, 64),
                                               {make_circle(1.5, 1.0, Orientation::cw, 64),
                                                make_circle(-1.5, 1.0, Orientation::cw, 64)});
  CHECK(three.ell() == 2);

  CHECK(code_of([] {
          assemble_domain(make_circle(0.0, 1.0, Orientation::ccw, 32),
                          {make_circle(2.0, 0.25, Orientation::cw, 32)});
        }) == "inner-outside");
  CHECK(code_of([] {
          assemble_domain(make_circle(0.0, 1.0, Orientation::ccw, 32),
                          {make_circle(0.1, 0.25, Orientation::cw, 32),
                           make_circle(-0.1, 0.25, Orientation::cw, 32)});
        }) == "inner-overlap");
  CHECK(code_of([] {
          assemble_domain(make_circle(0.0, 1.0, Orientation::ccw, 32),
                          {make_circle(0.0, 0.25, Orientation::cw, 64)});
        }) == "node-count-mismatch");
}

TEST_CASE("contains and classify on the annulus") {
  const DomainGeometry d = annulus(128);
  CHECK(contains(d, 0.5));
  CHECK_FALSE(contains(d, 0.1));
  CHECK_FALSE(contains(d, 2.0));
  CHECK(classify_point(d, d.boundaries[0].nodes[3]) == PointClass::boundary);
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(0.3, 0.95), a(0.0, kTwoPi);
  for (int k = 0; k < 100; ++k) {
    const Complex z = std::polar(u(rng), a(rng));
    CHECK(winding_number(d.boundaries[0].nodes, z) == 1);
    CHECK(winding_number(d.boundaries[1].nodes, z) == 0);
  }
}

TEST_CASE("distance to the boundary") {
  CHECK(dist_to_boundary(annulus(256), 0.5) == doctest::Approx(0.25).epsilon(1e-4));
  const DomainGeometry disk = assemble_domain(make_circle(0.0, 1.0, Orientation::ccw, 256), {});
  CHECK(dist_to_boundary(disk, 0.0) == doctest::Approx(1.0).epsilon(1e-4));
  const DomainGeometry sq = assemble_domain(
      make_polygon({{-1, -1}, {1, -1}, {1, 1}, {-1, 1}}, Orientation::ccw, 64), {});
  CHECK(dist_to_boundary(sq, 0.0) == doctest::Approx(1.0).epsilon(1e-12));
  const NearestBoundaryPoint p = nearest_boundary_point(sq, Complex(0.3, 0.9));
  CHECK(p.distance == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(std::abs(p.point - Complex(0.3, 1.0)) < 1e-12);
}

TEST_CASE("open-up maps") {
  CHECK(std::abs(open_up_psi1(1.0) - 1.0) < 1e-15);
  CHECK(std::abs(open_up_psi1(-1.0)) < 1e-15);
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  int tested = 0;
  while (tested < 100) {
    const Complex z(u(rng), u(rng));
    if (segment_distance(z, 0.0, 1.0) < 1e-3) continue;
    const Complex w = open_up_psi2(z);
    CHECK(std::abs(w) > 1.0);
    CHECK(std::abs(open_up_psi1(w) - z) <= 1e-12 * std::max(1.0, std::abs(z)));
    const Complex analytic = 4.0 * w * w / (w * w - 1.0);
    CHECK(std::abs(open_up_psi2_deriv(z) - analytic) <= 1e-10 * std::abs(analytic));
    ++tested;
  }
  const Complex big(1e6, 0.0);
  CHECK(std::abs(open_up_psi2(big) / (4.0 * big) - 1.0) <= 1e-5);
  CHECK(code_of([] { open_up_psi2(0.5); }) == "point-on-slit");
}

TEST_CASE("open-up derivatives match finite differences") {
  const Complex z(0.3, 0.7), e(1e-6, 0.0);
  const Complex fd = (open_up_psi2(z + e) - open_up_psi2(z - e)) / (2.0 * e);
  CHECK(std::abs(fd - open_up_psi2_deriv(z)) < 1e-7);
  const Complex fd2 = (open_up_psi2_deriv(z + e) - open_up_psi2_deriv(z - e)) / (2.0 * e);
  CHECK(std::abs(fd2 - open_up_psi2_deriv2(z)) < 1e-6);
}
