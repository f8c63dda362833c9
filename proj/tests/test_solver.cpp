#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "mityuk/error.hpp"
#include "mityuk/mityuk.hpp"
#include "mityuk/oracles.hpp"

using namespace mityuk;

namespace {

struct Problem {
  DomainGeometry domain;
  KernelMatrices K;
  Vector gamma;
};

Problem annulus_problem(int n, Complex alpha, const SlitSpec& slits) {
  Problem p;
  p.domain = assemble_domain(make_circle(0.0, 1.0, Orientation::ccw, n),
                             {make_circle(0.0, 0.25, Orientation::cw, n)});
  const RhsData rhs = build_rhs(p.domain, alpha, slits);
  p.K = assemble_kernels(p.domain, rhs.A);
  p.gamma = rhs.gamma;
  return p;
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

TEST_CASE("gmres solves a well-conditioned system") {
  std::mt19937 rng(3);
  std::normal_distribution<double> g;
  const int n = 60;
  Matrix A = Matrix::Identity(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) A(i, j) += 0.3 * g(rng) / std::sqrt(n);
  Vector b(n);
  for (int i = 0; i < n; ++i) b[i] = g(rng);
  const GmresResult r = gmres(A, b, 1e-13, 200);
  CHECK(r.converged);
  CHECK((A * r.x - b).norm() <= 1e-12 * b.norm());
  const Vector x = A.partialPivLu().solve(b);
  CHECK((r.x - x).norm() <= 1e-11 * x.norm());

  const GmresResult restarted = gmres(A, b, 1e-13, 400, 10);
  CHECK(restarted.converged);
  CHECK((restarted.x - x).norm() <= 1e-10 * x.norm());
}

TEST_CASE("gmres reports non-convergence") {
  Matrix A = Matrix::Zero(20, 20);
  for (int i = 0; i < 20; ++i) A(i, (i + 1) % 20) = 1.0;  // cyclic shift
  const Vector b = Vector::Unit(20, 0);
  const GmresResult r = gmres(A, b, 1e-14, 5);
  CHECK_FALSE(r.converged);
  CHECK(r.relative_residual > 0.5);
}

TEST_CASE("dense and iterative solves agree on the annulus") {
  for (const SlitSpec& s : {SlitSpec::circular(1), SlitSpec::radial(1)}) {
    const Problem p = annulus_problem(256, Complex(0.3, 0.4), s);
    const ComponentLayout layout = component_layout(p.domain);
    SolverConfig direct;
    SolverConfig iter;
    iter.method = SolverMethod::iterative;
    const DensityAndConstants a = solve_density(p.K.N, p.K.M, p.gamma, direct, layout);
    const DensityAndConstants b = solve_density(p.K.N, p.K.M, p.gamma, iter, layout);
    CHECK(std::abs(a.h_means[0] - b.h_means[0]) <= 1e-10);
    CHECK(b.relative_residual <= 10 * iter.tol);
    CHECK(b.iterations > 0);
    CHECK(b.iterations <= iter.max_iter);
    for (double sd : a.h_residuals) CHECK(sd < 1e-12);
  }
}

TEST_CASE("annulus h0 matches the product formula") {
  const Problem p = annulus_problem(1024, 0.5, SlitSpec::circular(1));
  const DensityAndConstants d = solve_density(p.K.N, p.K.M, p.gamma, {}, component_layout(p.domain));
  const double R = oracles::annulus_R_circular(0.25, 0.5);
  CHECK(std::abs(std::exp(d.h_means[0]) / R - 1.0) <= 1e-10);
}

TEST_CASE("disk at the centre has h0 = 0") {
  const DomainGeometry d = assemble_domain(make_circle(0.0, 1.0, Orientation::ccw, 64), {});
  const RhsData rhs = build_rhs(d, 0.0, SlitSpec::circular(0));
  const KernelMatrices K = assemble_kernels(d, rhs.A);
  const DensityAndConstants r = solve_density(K.N, K.M, rhs.gamma, {}, component_layout(d));
  CHECK(std::abs(r.h_means[0]) < 1e-14);
}

TEST_CASE("zero right-hand side gives zero density") {
  const Problem p = annulus_problem(64, 0.5, SlitSpec::circular(1));
  const Vector zero = Vector::Zero(p.gamma.size());
  for (SolverMethod m : {SolverMethod::dense_direct, SolverMethod::iterative}) {
    SolverConfig cfg;
    cfg.method = m;
    const DensityAndConstants r = solve_density(p.K.N, p.K.M, zero, cfg, component_layout(p.domain));
    CHECK(r.mu.cwiseAbs().maxCoeff() == 0.0);
    CHECK(r.h.cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("component statistics") {
  const ComponentLayout layout = uniform_layout(2, 4);
  Vector v(8);
  v << 1, 1, 1, 1, 0, 2, 0, 2;
  std::vector<double> means, sds;
  component_statistics(layout, v, means, sds);
  CHECK(means[0] == doctest::Approx(1.0));
  CHECK(sds[0] == doctest::Approx(0.0));
  CHECK(means[1] == doctest::Approx(1.0));
  CHECK(sds[1] == doctest::Approx(1.0));
}

TEST_CASE("solver errors") {
  SolverConfig bad;
  bad.tol = 0.0;
  CHECK(code_of([&] { bad.validate(); }) == "invalid-config");
  bad = {};
  bad.max_iter = 0;
  CHECK(code_of([&] { bad.validate(); }) == "invalid-config");

  const Problem p = annulus_problem(64, 0.5, SlitSpec::circular(1));
  const ComponentLayout layout = component_layout(p.domain);
  SolverConfig starved;
  starved.method = SolverMethod::iterative;
  starved.max_iter = 1;
  CHECK(code_of([&] { solve_density(p.K.N, p.K.M, p.gamma, starved, layout); }) ==
        "solver-not-converged");

  const Matrix singular = Matrix::Identity(p.K.N.rows(), p.K.N.cols());
  CHECK(code_of([&] { solve_density(singular, p.K.M, p.gamma, {}, layout); }) == "singular-system");

  Vector nan = p.gamma;
  nan[3] = std::nan("");
  CHECK(code_of([&] { solve_density(p.K.N, p.K.M, nan, {}, layout); }) == "invalid-rhs");
  CHECK(code_of([&] { solve_density(p.K.N, p.K.M, p.gamma.head(10), {}, layout); }) ==
        "dimension-mismatch");
}
