#pragma once

#include <array>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mityuk/geometry.hpp"
#include "mityuk/kernel.hpp"
#include "mityuk/solver.hpp"

namespace mityuk {

inline constexpr double kCircularSlit = kPi / 2.0;
inline constexpr double kRadialSlit = 0.0;

/// Oblique angles (theta_1, ..., theta_ell) of the image slits; theta_0 is
/// pi/2. Entries are pi/2 (circular) or 0 (radial) unless `allow_oblique`.
struct SlitSpec {
  std::vector<double> thetas;
  bool allow_oblique = false;

  static SlitSpec circular(int ell) { return {std::vector<double>(ell, kCircularSlit)}; }
  static SlitSpec radial(int ell) { return {std::vector<double>(ell, kRadialSlit)}; }

  /// Angle of component k, with k = 0 the outer curve.
  double theta(int k) const { return k == 0 ? kCircularSlit : thetas[k - 1]; }
  void validate(int ell) const;
};

/// Parse "C,R,0,1.5707963" style lists: C/c = circular, R/r = radial, or
/// numbers in radians.
SlitSpec parse_slits(const std::string& text);

struct RhsData {
  CoefficientA A;
  Vector gamma;
};

/// Default guard for evaluation points: 1e-3 of the local node spacing.
inline constexpr double kPointGuardFactor = 1e-3;

/// Coefficient A and right-hand side gamma at every node. gamma is
/// -log|eta - alpha| on circular components and a continuous branch of
/// arg(eta - alpha) on radial ones.
RhsData build_rhs(const DomainGeometry& domain, Complex alpha, const SlitSpec& slits,
                  double guard_factor = kPointGuardFactor);

struct MityukResult {
  Complex alpha;
  double h0 = 0.0;
  double R = 0.0;
  double m = 0.0;
  double c = 0.0;
  /// Circular components: radius exp(-R_k); radial components: angle R_k.
  std::vector<double> slit_params;
  std::vector<double> constancy_residuals;
  double relative_residual = 0.0;
  int iterations = 0;
  int n = 0;
  std::optional<std::vector<Complex>> boundary_values;
};

MityukResult mityuk_values(const DomainGeometry& domain, Complex alpha, const SlitSpec& slits,
                           const SolverConfig& cfg = {}, bool with_boundary_values = false);

/// Phi_alpha at every node from a solved density.
std::vector<Complex> boundary_map(const DomainGeometry& domain, Complex alpha,
                                  const SlitSpec& slits, const DensityAndConstants& density);

struct BoundaryResiduals {
  /// max ||Phi| - 1| on the outer curve.
  double outer_modulus_error = 0.0;
  /// Per component k, the standard deviation of Im[exp(-i theta_k) log Phi].
  std::vector<double> component_sd;
};

BoundaryResiduals boundary_condition_residuals(const DomainGeometry& domain,
                                               const SlitSpec& slits,
                                               std::span<const Complex> phi);

/// Outer curve plus a straight slit [from, to] inside it.
struct SlitDomainSpec {
  BoundaryCurve outer;
  Complex slit_from;
  Complex slit_to;
  int n = 1024;
  int grading_order = 3;
};

/// A physical domain together with the domain on which the integral
/// equation is solved. For Jordan domains the two coincide; for a slit
/// domain the computational domain is the image under z -> psi2(T z), with
/// T the affine map sending the slit onto [0, 1].
class Region {
 public:
  static Region from_curves(BoundaryCurve outer, std::vector<BoundaryCurve> inners, int n,
                            int grading_order = 3);
  /// Fixed mesh without the source curves (no per-point refinement).
  static Region from_geometry(DomainGeometry domain);
  static Region with_slit(const SlitDomainSpec& spec);

  int ell() const { return geometry_.ell(); }
  bool has_slit() const { return slit_.has_value(); }
  int nodes_per_component() const { return geometry_.nodes_per_component(); }

  /// Computational mesh at the default node count.
  const DomainGeometry& geometry() const { return geometry_; }
  /// Computational mesh with n nodes per component; if `refine_at` is given,
  /// the component nearest to it receives an extra grading breakpoint at the
  /// nearest boundary point.
  DomainGeometry geometry_for(int n, std::optional<Complex> refine_at = std::nullopt) const;

  PointClass classify(Complex z, double guard = -1.0) const;
  double dist_to_boundary(Complex z) const;
  /// Distance to the computational boundary in units of the local node spacing.
  double guard_ratio(Complex z) const;

  Complex to_computational(Complex z) const;
  /// log |d(to_computational)/dz|.
  double log_derivative_modulus(Complex z) const;
  double derivative_argument(Complex z) const;

  /// Bounding box of the physical domain: (xmin, xmax, ymin, ymax).
  std::array<double, 4> bounding_box() const;
  double outer_diameter() const;

 private:
  struct Slit {
    Complex from;
    Complex to;
  };

  std::vector<BoundaryCurve> curves_;  // computational curves, outer first
  int grading_order_ = 3;
  DomainGeometry geometry_;
  DomainGeometry physical_outer_;  // slit regions: the outer curve alone
  std::optional<Slit> slit_;
};

/// Single evaluation on a region; slit regions are transferred through the
/// open-up map. `refine` regrades the mesh at the nearest boundary point and
/// `n` (if positive) overrides the node count.
MityukResult mityuk_values(const Region& region, Complex alpha, const SlitSpec& slits,
                           const SolverConfig& cfg = {}, int n = 0, bool refine = false);

MityukResult mityuk_via_openup(const SlitDomainSpec& spec, Complex alpha, const SlitSpec& slits,
                               const SolverConfig& cfg = {});

/// Fast log R(G, alpha) for many alpha on one region and slit choice.
///
/// The kernels at alpha differ from those at a fixed reference point by a
/// rank-two term, so one factorization of I - N at the reference point
/// serves every alpha; each evaluation then costs one product with the
/// precomputed (I - N)^{-1} M, batched over the supplied points.
class RadiusEvaluator {
 public:
  RadiusEvaluator(const Region& region, SlitSpec slits);

  /// log R at each point; NaN where the point is not interior or is closer
  /// to the boundary than `guard_factor` local spacings.
  std::vector<double> log_radius(std::span<const Complex> alphas,
                                 double guard_factor = kPointGuardFactor) const;
  double log_radius(Complex alpha) const;

  const Region& region() const { return region_; }
  const SlitSpec& slits() const { return slits_; }
  Complex reference_point() const { return reference_; }

 private:
  Region region_;
  SlitSpec slits_;
  Complex reference_;  // computational plane
  Matrix Q_;           // (I - N0)^{-1} M0
  Matrix P_;           // (I - N0)^{-1} U
  Matrix U_;
  std::vector<Complex> eta_, phase_b_, ref_inv_;  // eta, exp(i theta) eta', 1/(eta - alpha0)
  Vector ell0_, r0_, q0_;  // outer-curve averaging vector, M0^T ell0, N0^T ell0
  Eigen::Vector2d e0_;
  int n_ = 0;
};

}  // namespace mityuk
