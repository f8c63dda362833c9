#pragma once

#include <optional>
#include <vector>

#include "mityuk/kernel.hpp"

namespace mityuk {

enum class SolverMethod { dense_direct, iterative };

struct SolverConfig {
  SolverMethod method = SolverMethod::dense_direct;
  double tol = 1e-14;
  int max_iter = 100;
  std::optional<int> restart;

  void validate() const;
};

/// Node layout of J plus the quadrature weights used to average a function
/// over one component. Weights are proportional to |eta'|, so the average is
/// taken with respect to arc length.
struct ComponentLayout {
  int components = 1;
  int n = 0;
  std::vector<double> weights;

  std::size_t total() const { return static_cast<std::size_t>(components) * n; }
};

ComponentLayout component_layout(const DomainGeometry& domain);
/// Equal weights, for callers without geometry.
ComponentLayout uniform_layout(int components, int n);

struct DensityAndConstants {
  Vector mu;
  Vector h;
  std::vector<double> h_means;
  std::vector<double> h_residuals;
  /// ||(I - N) mu + M gamma||_inf / ||M gamma||_inf.
  double relative_residual = 0.0;
  int iterations = 0;
};

/// Weighted mean and standard deviation of `values` on each component.
void component_statistics(const ComponentLayout& layout, const Vector& values,
                          std::vector<double>& means, std::vector<double>& deviations);

/// Solve (I - N) mu = -M gamma and form h = [M mu - (I - N) gamma] / 2.
DensityAndConstants solve_density(const Matrix& N, const Matrix& M, const Vector& gamma,
                                  const SolverConfig& cfg, const ComponentLayout& layout);

struct GmresResult {
  Vector x;
  int iterations = 0;
  double relative_residual = 0.0;
  bool converged = false;
};

/// GMRES for A x = b with zero initial guess, modified Gram-Schmidt Arnoldi
/// and Givens rotations. `restart` empty means no restart.
GmresResult gmres(const Matrix& A, const Vector& b, double tol, int max_iter,
                  std::optional<int> restart = std::nullopt);

}  // namespace mityuk
