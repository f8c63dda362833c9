#include "mityuk/kernel.hpp"

#include <cmath>

#include "mityuk/error.hpp"

namespace mityuk {

namespace {

void check_layout(const DomainGeometry& domain, const CoefficientA& A) {
  const std::size_t total = domain.total_nodes();
  if (A.values.size() != total || A.derivs.size() != total) {
    throw Error("dimension-mismatch", "coefficient A does not match the node layout");
  }
  for (const Complex& a : A.values) {
    if (a == Complex{}) throw Error("zero-coefficient", "coefficient A vanishes at a node");
  }
}

CurvePoint node_point(const ParamBoundary& b, std::size_t i) {
  return CurvePoint{b.nodes[i], b.first_derivs[i], b.second_derivs[i]};
}

// Fills N and/or M. Either pointer may be null.
void assemble(const DomainGeometry& domain, const CoefficientA& A, Matrix* N, Matrix* M) {
  check_layout(domain, A);
  const int n = domain.nodes_per_component();
  const int components = domain.ell() + 1;
  const std::size_t total = domain.total_nodes();
  const double weight = 2.0 / n;  // (2 pi / n) / pi

  std::vector<Complex> eta(total), deta_over_a(total);
  for (int k = 0; k < components; ++k) {
    const ParamBoundary& b = domain.boundaries[k];
    for (int i = 0; i < n; ++i) {
      const std::size_t g = domain.offset(k) + i;
      eta[g] = b.nodes[i];
      deta_over_a[g] = b.first_derivs[i] / A.values[g];
    }
  }

  // cot(pi d / n) / n for the cotangent split, and the conjugation stencil.
  std::vector<double> half_cot(n, 0.0), conj(n, 0.0);
  for (int d = 1; d < n; ++d) {
    const double c = 1.0 / std::tan(kPi * d / n);
    half_cot[d] = c / n;
    if (d % 2 == 1) conj[d] = 2.0 * c / n;
  }

  if (N) N->resize(total, total);
  if (M) M->resize(total, total);

  for (std::size_t j = 0; j < total; ++j) {
    const int kj = static_cast<int>(j / n);
    const int ij = static_cast<int>(j % n);
    const Complex cj = deta_over_a[j];
    const Complex ej = eta[j];
    double* ncol = N ? N->col(j).data() : nullptr;
    double* mcol = M ? M->col(j).data() : nullptr;
    for (std::size_t i = 0; i < total; ++i) {
      if (i == j) continue;
      const Complex diff = ej - eta[i];
      // Strong grading can merge a node with its corner in floating point.
      const Complex value =
          diff == Complex{} ? Complex{} : A.values[i] * cj * std::conj(diff) / std::norm(diff);
      if (ncol) ncol[i] = weight * value.imag();
      if (mcol) {
        double entry = weight * value.real();
        if (static_cast<int>(i / n) == kj) {
          const int d = ((static_cast<int>(i % n) - ij) % n + n) % n;
          entry += half_cot[d] - conj[d];
        }
        mcol[i] = entry;
      }
    }
    const ParamBoundary& b = domain.boundaries[kj];
    const CurvePoint p = node_point(b, ij);
    if (ncol) ncol[j] = weight * kPi * neumann_diagonal(p, A.values[j], A.derivs[j]);
    if (mcol) mcol[j] = weight * kPi * m1_diagonal(p, A.values[j], A.derivs[j]);
  }
}

}  // namespace

Complex kernel_value(const CurvePoint& s, Complex a_s, const CurvePoint& t, Complex a_t) {
  return (a_s / a_t) * t.dz / (t.z - s.z) / kPi;
}

double neumann_diagonal(const CurvePoint& t, Complex a, Complex da) {
  if (t.dz == Complex{}) return 0.0;
  return ((t.d2z / (2.0 * t.dz)).imag() - (da / a).imag()) / kPi;
}

double m1_diagonal(const CurvePoint& t, Complex a, Complex da) {
  if (t.dz == Complex{}) return 0.0;
  return ((t.d2z / (2.0 * t.dz)).real() - (da / a).real()) / kPi;
}

double m1_value(double s_param, const CurvePoint& s, Complex a_s, double t_param,
                const CurvePoint& t, Complex a_t) {
  return kernel_value(s, a_s, t, a_t).real() + 1.0 / std::tan(0.5 * (s_param - t_param)) / kTwoPi;
}

Matrix assemble_N(const DomainGeometry& domain, const CoefficientA& A) {
  Matrix N;
  assemble(domain, A, &N, nullptr);
  return N;
}

Matrix assemble_M(const DomainGeometry& domain, const CoefficientA& A) {
  if (domain.nodes_per_component() % 2 != 0) {
    throw Error("invalid-node-count", "the conjugation operator needs an even node count");
  }
  Matrix M;
  assemble(domain, A, nullptr, &M);
  return M;
}

KernelMatrices assemble_kernels(const DomainGeometry& domain, const CoefficientA& A) {
  if (domain.nodes_per_component() % 2 != 0) {
    throw Error("invalid-node-count", "the conjugation operator needs an even node count");
  }
  KernelMatrices km;
  assemble(domain, A, &km.N, &km.M);
  return km;
}

Matrix conjugation_matrix(int n) {
  if (n < 2 || n % 2 != 0) {
    throw Error("invalid-node-count", "the conjugation operator needs an even node count");
  }
  Matrix K = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const int d = ((i - j) % n + n) % n;
      if (d % 2 == 1) K(i, j) = 2.0 / n / std::tan(kPi * d / n);
    }
  }
  return K;
}

Vector apply_operator(const Matrix& matrix, const Vector& vector) {
  if (matrix.cols() != vector.size()) {
    throw Error("dimension-mismatch", "operator has " + std::to_string(matrix.cols()) +
                                          " columns but the vector has " +
                                          std::to_string(vector.size()) + " entries");
  }
  return matrix * vector;
}

}  // namespace mityuk
