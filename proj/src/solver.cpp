#include "mityuk/solver.hpp"

#include <cmath>

#include "mityuk/error.hpp"

namespace mityuk {

void SolverConfig::validate() const {
  if (!(tol > 0.0)) throw Error("invalid-config", "solver tolerance must be positive");
  if (max_iter < 1) throw Error("invalid-config", "max_iter must be at least 1");
  if (restart && *restart < 1) throw Error("invalid-config", "restart must be at least 1");
}

ComponentLayout component_layout(const DomainGeometry& domain) {
  ComponentLayout layout;
  layout.components = domain.ell() + 1;
  layout.n = domain.nodes_per_component();
  layout.weights.reserve(layout.total());
  for (const ParamBoundary& b : domain.boundaries) {
    for (const Complex& d : b.first_derivs) layout.weights.push_back(std::abs(d));
  }
  return layout;
}

ComponentLayout uniform_layout(int components, int n) {
  ComponentLayout layout;
  layout.components = components;
  layout.n = n;
  layout.weights.assign(layout.total(), 1.0);
  return layout;
}

void component_statistics(const ComponentLayout& layout, const Vector& values,
                          std::vector<double>& means, std::vector<double>& deviations) {
  means.assign(layout.components, 0.0);
  deviations.assign(layout.components, 0.0);
  for (int k = 0; k < layout.components; ++k) {
    const std::size_t off = static_cast<std::size_t>(k) * layout.n;
    double wsum = 0.0, sum = 0.0;
    for (int i = 0; i < layout.n; ++i) {
      wsum += layout.weights[off + i];
      sum += layout.weights[off + i] * values[off + i];
    }
    const double mean = sum / wsum;
    double var = 0.0;
    for (int i = 0; i < layout.n; ++i) {
      const double d = values[off + i] - mean;
      var += layout.weights[off + i] * d * d;
    }
    means[k] = mean;
    deviations[k] = std::sqrt(var / wsum);
  }
}

GmresResult gmres(const Matrix& A, const Vector& b, double tol, int max_iter,
                  std::optional<int> restart) {
  const Eigen::Index n = b.size();
  GmresResult out;
  out.x = Vector::Zero(n);
  const double bnorm = b.norm();
  if (bnorm == 0.0) {
    out.converged = true;
    return out;
  }
  const int m = restart ? std::min(*restart, max_iter) : max_iter;

  Vector r = b;
  double beta = bnorm;
  while (out.iterations < max_iter) {
    Matrix V(n, m + 1);
    Matrix H = Matrix::Zero(m + 1, m);
    Vector cs = Vector::Zero(m), sn = Vector::Zero(m), g = Vector::Zero(m + 1);
    V.col(0) = r / beta;
    g[0] = beta;
    int j = 0;
    for (; j < m && out.iterations < max_iter; ++j) {
      ++out.iterations;
      Vector w = A * V.col(j);
      for (int i = 0; i <= j; ++i) {
        H(i, j) = V.col(i).dot(w);
        w -= H(i, j) * V.col(i);
      }
      H(j + 1, j) = w.norm();
      if (H(j + 1, j) > 0.0) V.col(j + 1) = w / H(j + 1, j);
      for (int i = 0; i < j; ++i) {
        const double t = cs[i] * H(i, j) + sn[i] * H(i + 1, j);
        H(i + 1, j) = -sn[i] * H(i, j) + cs[i] * H(i + 1, j);
        H(i, j) = t;
      }
      const double rho = std::hypot(H(j, j), H(j + 1, j));
      cs[j] = H(j, j) / rho;
      sn[j] = H(j + 1, j) / rho;
      H(j, j) = rho;
      H(j + 1, j) = 0.0;
      g[j + 1] = -sn[j] * g[j];
      g[j] = cs[j] * g[j];
      if (std::abs(g[j + 1]) <= tol * bnorm || H(j, j) == 0.0) {
        ++j;
        break;
      }
    }
    Vector y = H.topLeftCorner(j, j).triangularView<Eigen::Upper>().solve(g.head(j));
    out.x += V.leftCols(j) * y;
    r = b - A * out.x;
    beta = r.norm();
    out.relative_residual = beta / bnorm;
    if (out.relative_residual <= tol) {
      out.converged = true;
      break;
    }
    if (beta == 0.0) break;
  }
  return out;
}

DensityAndConstants solve_density(const Matrix& N, const Matrix& M, const Vector& gamma,
                                  const SolverConfig& cfg, const ComponentLayout& layout) {
  cfg.validate();
  const Eigen::Index total = gamma.size();
  if (N.rows() != total || N.cols() != total || M.rows() != total || M.cols() != total ||
      static_cast<std::size_t>(total) != layout.total()) {
    throw Error("dimension-mismatch", "matrices, right-hand side and layout disagree");
  }
  if (!gamma.allFinite()) throw Error("invalid-rhs", "right-hand side is not finite");

  Matrix B = -N;
  B.diagonal().array() += 1.0;
  const Vector Mg = M * gamma;
  const Vector rhs = -Mg;

  DensityAndConstants out;
  if (cfg.method == SolverMethod::dense_direct) {
    Eigen::PartialPivLU<Matrix> lu(B);
    const double rc = lu.rcond();
    if (!(rc > 1e-14)) {
      throw Error("singular-system", "I - N is numerically singular (rcond " + std::to_string(rc) + ")");
    }
    out.mu = lu.solve(rhs);
  } else {
    // Relative tolerance on ||b||_2; the certificate below uses the inf-norm.
    GmresResult g = gmres(B, rhs, cfg.tol, cfg.max_iter, cfg.restart);
    out.iterations = g.iterations;
    if (!g.converged) {
      throw Error("solver-not-converged",
                  "GMRES stopped after " + std::to_string(g.iterations) +
                      " iterations with relative residual " + std::to_string(g.relative_residual));
    }
    out.mu = std::move(g.x);
  }

  const Vector residual = B * out.mu + Mg;
  const double scale = Mg.lpNorm<Eigen::Infinity>();
  out.relative_residual =
      scale > 0.0 ? residual.lpNorm<Eigen::Infinity>() / scale : residual.lpNorm<Eigen::Infinity>();
  out.h = 0.5 * (M * out.mu - B * gamma);
  component_statistics(layout, out.h, out.h_means, out.h_residuals);
  return out;
}

}  // namespace mityuk
