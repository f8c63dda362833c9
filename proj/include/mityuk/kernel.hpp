#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "mityuk/geometry.hpp"

namespace mityuk {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Coefficient function A of the generalized Neumann kernel and its
/// parameter derivative, sampled on every node of J (component-major).
struct CoefficientA {
  std::vector<Complex> values;
  std::vector<Complex> derivs;
};

/// Nystrom matrices with trapezoidal weights folded in, so that
/// (N mu)(s_i) ~ sum_j N(i, j) mu_j.
struct KernelMatrices {
  Matrix N;
  Matrix M;
};

/// (1/pi) A(s)/A(t) eta'(t)/(eta(t) - eta(s)); N is its imaginary part and
/// M its real part.
Complex kernel_value(const CurvePoint& s, Complex a_s, const CurvePoint& t, Complex a_t);

/// Continuous diagonal limit of N(t, t).
double neumann_diagonal(const CurvePoint& t, Complex a, Complex da);

/// Diagonal limit of M1(t, t), where M(s, t) = -cot((s - t)/2)/(2 pi) + M1(s, t).
double m1_diagonal(const CurvePoint& t, Complex a, Complex da);

/// Off-diagonal M1 on one component, parameter values s != t.
double m1_value(double s_param, const CurvePoint& s, Complex a_s, double t_param,
                const CurvePoint& t, Complex a_t);

Matrix assemble_N(const DomainGeometry& domain, const CoefficientA& A);
Matrix assemble_M(const DomainGeometry& domain, const CoefficientA& A);
KernelMatrices assemble_kernels(const DomainGeometry& domain, const CoefficientA& A);

/// Discrete periodic conjugation on n equispaced nodes: Fourier multiplier
/// -i sgn(k) for |k| < n/2, zero on the mean and on the Nyquist mode.
/// Maps cos(kt) to sin(kt) and sin(kt) to -cos(kt).
Matrix conjugation_matrix(int n);

Vector apply_operator(const Matrix& matrix, const Vector& vector);

}  // namespace mityuk
