#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Eigenvalues>

#include "mityuk/error.hpp"
#include "mityuk/kernel.hpp"

using namespace mityuk;

namespace {

CurvePoint ellipse(double t) {
  return {Complex(1.3 * std::cos(t), 0.8 * std::sin(t)), Complex(-1.3 * std::sin(t), 0.8 * std::cos(t)),
          Complex(-1.3 * std::cos(t), -0.8 * std::sin(t))};
}

// A = exp(i(pi/2 - theta)) (eta - alpha).
CoefficientA coefficient(const DomainGeometry& d, Complex alpha, double theta) {
  CoefficientA A;
  const Complex rot = std::polar(1.0, kPi / 2 - theta);
  for (const ParamBoundary& b : d.boundaries) {
    for (std::size_t i = 0; i < b.size(); ++i) {
      A.values.push_back(rot * (b.nodes[i] - alpha));
      A.derivs.push_back(rot * b.first_derivs[i]);
    }
  }
  return A;
}

DomainGeometry ellipse_domain(int n) {
  return assemble_domain(make_smooth_curve(ellipse, Orientation::ccw, n), {});
}

}  // namespace

TEST_CASE("N diagonal is the limit of nearby kernel values") {
  const Complex alpha(0.2, -0.1);
  for (double theta : {kPi / 2, 0.0}) {
    const Complex rot = std::polar(1.0, kPi / 2 - theta);
    for (double t : {0.3, 2.0, 4.5}) {
      const CurvePoint ct = ellipse(t);
      const Complex at = rot * (ct.z - alpha), dat = rot * ct.dz;
      const double diag = neumann_diagonal(ct, at, dat);
      double prev = INFINITY;
      for (int k = 2; k <= 5; ++k) {
        const double eps = std::pow(10.0, -k);
        const CurvePoint cs = ellipse(t + eps);
        const double err = std::abs(kernel_value(cs, rot * (cs.z - alpha), ct, at).imag() - diag);
        CHECK(err < 10 * eps);
        CHECK(err < prev);
        prev = err;
      }
    }
  }
}

TEST_CASE("M1 diagonal is the limit of nearby M1 values") {
  const Complex alpha(0.2, -0.1);
  for (double theta : {kPi / 2, 0.0}) {
    const Complex rot = std::polar(1.0, kPi / 2 - theta);
    for (double t : {0.3, 2.0, 4.5}) {
      const CurvePoint ct = ellipse(t);
      const Complex at = rot * (ct.z - alpha), dat = rot * ct.dz;
      const double diag = m1_diagonal(ct, at, dat);
      for (int k = 2; k <= 4; ++k) {
        const double eps = std::pow(10.0, -k);
        const CurvePoint cs = ellipse(t + eps);
        const double v = m1_value(t + eps, cs, rot * (cs.z - alpha), t, ct, at);
        CHECK(std::abs(v - diag) < 10 * eps);
      }
    }
  }
}

TEST_CASE("conjugation is exact on trigonometric modes") {
  for (int n : {64, 256}) {
    const Matrix K = conjugation_matrix(n);
    Vector c(n), s(n);
    CHECK((K * Vector::Ones(n)).cwiseAbs().maxCoeff() < 1e-13);
    double worst = 0.0;
    for (int k = 1; k < n / 2; ++k) {
      for (int i = 0; i < n; ++i) {
        const double t = kTwoPi * ((k * i) % n) / n;
        c[i] = std::cos(t);
        s[i] = std::sin(t);
      }
      worst = std::max(worst, (K * c - s).cwiseAbs().maxCoeff());
      worst = std::max(worst, (K * s + c).cwiseAbs().maxCoeff());
    }
    CHECK(worst <= 1e-13);
  }
  CHECK_THROWS_AS(conjugation_matrix(15), Error);
}

TEST_CASE("N on a circle centred at alpha has a single nonzero eigenvalue") {
  const int n = 64;
  const DomainGeometry d = assemble_domain(make_circle(0.0, 1.0, Orientation::ccw, n), {});
  const Matrix N = assemble_N(d, coefficient(d, 0.0, kPi / 2));
  Eigen::EigenSolver<Matrix> es(N);
  std::vector<double> mags;
  for (int i = 0; i < n; ++i) mags.push_back(std::abs(es.eigenvalues()[i]));
  std::sort(mags.begin(), mags.end());
  CHECK(mags[n - 2] < 1e-12);
  int minus_one = 0;
  for (int i = 0; i < n; ++i) minus_one += std::abs(es.eigenvalues()[i] - Complex(-1.0, 0.0)) < 1e-12;
  CHECK(minus_one == 1);
}

TEST_CASE("N entries scale like 1/n on a smooth curve") {
  std::vector<double> scaled;
  for (int n : {64, 128, 256}) {
    const DomainGeometry d = ellipse_domain(n);
    const Matrix N = assemble_N(d, coefficient(d, Complex(0.1, 0.2), kPi / 2));
    CHECK(N.allFinite());
    scaled.push_back(N.cwiseAbs().maxCoeff() * n);
  }
  CHECK(scaled[1] == doctest::Approx(scaled[0]).epsilon(0.05));
  CHECK(scaled[2] == doctest::Approx(scaled[0]).epsilon(0.05));
}

TEST_CASE("off-diagonal entries follow the kernel formula") {
  const int n = 32;
  const DomainGeometry d = assemble_domain(make_circle(0.0, 1.0, Orientation::ccw, n),
                                           {make_circle(0.1, 0.3, Orientation::cw, n)});
  const CoefficientA A = coefficient(d, Complex(0.55, 0.1), kPi / 2);
  const KernelMatrices K = assemble_kernels(d, A);
  const auto point = [&](std::size_t j) {
    const ParamBoundary& b = d.boundaries[j / n];
    const std::size_t i = j % n;
    return CurvePoint{b.nodes[i], b.first_derivs[i], b.second_derivs[i]};
  };
  for (auto [i, j] : {std::pair<std::size_t, std::size_t>{3, 7}, {5, 40}, {45, 2}, {33, 60}}) {
    const Complex k = kernel_value(point(i), A.values[i], point(j), A.values[j]);
    CHECK(K.N(i, j) == doctest::Approx(kTwoPi / n * k.imag()).epsilon(1e-12));
    if (i / n != j / n) CHECK(K.M(i, j) == doctest::Approx(kTwoPi / n * k.real()).epsilon(1e-12));
  }
}

TEST_CASE("assembly errors") {
  const DomainGeometry d = ellipse_domain(32);
  CoefficientA A = coefficient(d, 0.0, kPi / 2);
  A.values.pop_back();
  A.derivs.pop_back();
  CHECK_THROWS_AS(assemble_N(d, A), Error);
  A = coefficient(d, 0.0, kPi / 2);
  A.values[4] = 0.0;
  try {
    assemble_M(d, A);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == "zero-coefficient");
  }
}

TEST_CASE("apply_operator") {
  const DomainGeometry d = ellipse_domain(32);
  const Matrix M = assemble_M(d, coefficient(d, 0.1, kPi / 2));
  CHECK(apply_operator(M, Vector::Zero(32)).cwiseAbs().maxCoeff() == 0.0);
  const Vector a = Vector::LinSpaced(32, -1.0, 2.0), b = Vector::LinSpaced(32, 3.0, 0.5).cwiseSqrt();
  const Vector lhs = apply_operator(M, 2.5 * a - 0.75 * b);
  const Vector rhs = 2.5 * apply_operator(M, a) - 0.75 * apply_operator(M, b);
  CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-13);
  try {
    apply_operator(M, Vector::Zero(31));
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == "dimension-mismatch");
  }
}
