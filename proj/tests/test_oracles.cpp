#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mityuk/error.hpp"
#include "mityuk/oracles.hpp"

using namespace mityuk;
using namespace mityuk::oracles;

namespace {

// Plain product with a fixed number of factors, no log space.
double direct_product(double q, double r, int terms, bool alternating) {
  double p = 1.0 - r * r;
  for (int j = 1; j <= terms; ++j) {
    const double qj = std::pow(q, 2.0 * j);
    const double f = (1.0 - qj * r * r) * (1.0 - qj / (r * r)) / ((1.0 - qj) * (1.0 - qj));
    p *= (alternating && j % 2 == 1) ? 1.0 / f : f;
  }
  return p;
}

}  // namespace

TEST_CASE("annulus products against direct 500-term products") {
  for (double q : {0.1, 0.25, 0.5}) {
    for (double t : {0.1, 0.5, 0.9}) {
      const double r = q + t * (1.0 - q);
      CHECK(annulus_R_circular(q, r) == doctest::Approx(direct_product(q, r, 500, false)).epsilon(1e-13));
      CHECK(annulus_R_radial(q, r) == doctest::Approx(direct_product(q, r, 500, true)).epsilon(1e-13));
    }
  }
}

TEST_CASE("reference values at q = 0.25, r = 0.5") {
  CHECK(annulus_R_circular(0.25, 0.5) == doctest::Approx(direct_product(0.25, 0.5, 500, false)).epsilon(1e-14));
  CHECK(annulus_R_radial(0.25, 0.5) == doctest::Approx(direct_product(0.25, 0.5, 500, true)).epsilon(1e-14));
}

TEST_CASE("truncation is certified") {
  for (double q : {0.1, 0.5, 0.9}) {
    const double r = 0.5 * (q + 1.0);
    ProductConfig wide;
    wide.max_terms = 400;
    CHECK(std::abs(annulus_R_circular(q, r) - annulus_R_circular(q, r, wide)) < 1e-14);
    CHECK(std::abs(annulus_R_radial(q, r) - annulus_R_radial(q, r, wide)) < 1e-14);
  }
}

TEST_CASE("boundary behaviour") {
  CHECK(annulus_R_circular(0.25, 1.0 - 1e-6) < 1e-5);
  CHECK(annulus_R_radial(0.25, 1.0 - 1e-6) < 1e-5);
  CHECK(annulus_R_circular(0.25, 0.25 + 1e-6) < 1e-4);
  CHECK(annulus_R_radial(0.25, 0.25 + 1e-4) == doctest::Approx(direct_product(0.25, 0.25 + 1e-4, 500, true)).epsilon(1e-13));
  CHECK(annulus_R_radial(0.25, 0.25 + 1e-4) > 9e2);
  CHECK(annulus_R_radial(0.25, 0.25 + 1e-5) > 9e3);
}

TEST_CASE("circular product peaks at r = sqrt(q)") {
  const double q = 0.25;
  double best = -1.0, arg = 0.0;
  const int m = 2000;
  for (int k = 1; k < m; ++k) {
    const double r = q + (1.0 - q) * k / m;
    const double v = annulus_R_circular(q, r);
    if (v > best) {
      best = v;
      arg = r;
    }
  }
  CHECK(std::abs(arg - std::sqrt(q)) <= (1.0 - q) / m);
}

TEST_CASE("disk formula") {
  CHECK(disk_R(0.0) == 1.0);
  CHECK(disk_R(0.6) == doctest::Approx(0.64).epsilon(1e-15));
  CHECK(disk_R(Complex(0.3, 0.4)) == doctest::Approx(0.75).epsilon(1e-15));
}

TEST_CASE("argument checks") {
  CHECK_THROWS_AS(annulus_R_circular(0.25, 0.2), Error);
  CHECK_THROWS_AS(annulus_R_circular(0.25, 1.0), Error);
  CHECK_THROWS_AS(annulus_R_radial(1.5, 0.5), Error);
  CHECK_THROWS_AS(disk_R(1.0), Error);
  ProductConfig bad;
  bad.tol = 0.0;
  CHECK_THROWS_AS(annulus_R_circular(0.25, 0.5, bad), Error);
}
