#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <numbers>
#include <span>
#include <string>
#include <vector>

namespace mityuk {

using Complex = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

enum class Orientation { ccw, cw };

/// Position and first two derivatives of a curve at one parameter value.
struct CurvePoint {
  Complex z;
  Complex dz;
  Complex d2z;
};

/// Grading breakpoints of a curve (parameter values of the source curve) and
/// the order of the polynomial substitution applied between them.
struct CornerSpec {
  std::vector<double> corner_params;
  int grading_order = 3;
};

/// Analytic description of a closed boundary curve over the source
/// parameter tau in [0, 2*pi). Corners are the tau values where the curve
/// is only piecewise smooth; the discretization grades the mesh there.
class BoundaryCurve {
 public:
  using Evaluator = std::function<CurvePoint(double)>;

  BoundaryCurve() = default;
  BoundaryCurve(Evaluator eval, std::vector<double> corners, std::string kind);

  CurvePoint operator()(double tau) const { return eval_(tau); }
  const std::vector<double>& corners() const { return corners_; }
  const std::string& kind() const { return kind_; }
  bool is_smooth() const { return corners_.empty(); }

 private:
  Evaluator eval_;
  std::vector<double> corners_;
  std::string kind_;
};

BoundaryCurve circle_curve(Complex center, double radius);
/// z(tau) = sum_k c_k exp(i k tau).
BoundaryCurve fourier_curve(std::vector<std::pair<int, Complex>> coefficients);
/// Piecewise-linear curve through `vertices`, parametrized proportionally to
/// arc length; each vertex is a corner.
BoundaryCurve polygon_curve(std::vector<Complex> vertices);

/// Holomorphic map with its first two derivatives, used to push curves
/// through elementary conformal maps.
struct ConformalMap {
  std::function<Complex(Complex)> f;
  std::function<Complex(Complex)> df;
  std::function<Complex(Complex)> d2f;
};

BoundaryCurve mapped_curve(BoundaryCurve base, ConformalMap map);

/// One discretized Jordan curve on the uniform grid t_i = 2*pi*i/n.
///
/// With grading, `nodes[i] = eta(t_i)` where eta is the source curve composed
/// with the grading substitution, so `first_derivs` vanishes at breakpoints.
struct ParamBoundary {
  int component_index = 0;
  std::vector<Complex> nodes;
  std::vector<Complex> first_derivs;
  std::vector<Complex> second_derivs;
  std::vector<double> params;
  /// Source-curve parameter tau at every node.
  std::vector<double> curve_params;

  std::size_t size() const { return nodes.size(); }
  /// True where the grading substitution makes eta' vanish.
  bool is_graded_corner(std::size_t i) const { return first_derivs[i] == Complex{}; }
};

/// Discretize `curve` with n nodes. Breakpoints are the curve's corners plus
/// `extra_breaks`; between consecutive breakpoints the Kress substitution of
/// order `grading_order` concentrates nodes at both ends.
ParamBoundary discretize(const BoundaryCurve& curve, int n, Orientation orientation,
                         int grading_order = 3, std::span<const double> extra_breaks = {});

ParamBoundary make_circle(Complex center, double radius, Orientation orientation, int n);
ParamBoundary make_smooth_curve(const BoundaryCurve::Evaluator& fn, Orientation orientation,
                                int n);
ParamBoundary make_polygon(const std::vector<Complex>& vertices, Orientation orientation, int n,
                           const CornerSpec& grading = {});

/// Reverse the direction of traversal, keeping the parameter grid.
ParamBoundary reversed(const ParamBoundary& b);

/// Signed area enclosed by the node polygon (positive for ccw).
double signed_area(std::span<const Complex> nodes);

/// Winding number of the closed node polygon about z (Sunday's crossing rule).
int winding_number(std::span<const Complex> nodes, Complex z);

/// Kress grading substitution w(s) on [0, 2*pi] and its derivatives.
struct GradingValue {
  double w;
  double dw;
  double d2w;
};
GradingValue kress_substitution(double s, int order);

/// Multiply connected domain: boundaries[0] is the outer curve (ccw), the
/// others are holes (cw), all with the same node count.
struct DomainGeometry {
  std::vector<ParamBoundary> boundaries;

  int ell() const { return static_cast<int>(boundaries.size()) - 1; }
  int nodes_per_component() const { return static_cast<int>(boundaries.front().size()); }
  std::size_t total_nodes() const { return boundaries.size() * boundaries.front().size(); }
  std::size_t offset(int k) const { return static_cast<std::size_t>(k) * boundaries.front().size(); }
  /// Diameter of the bounding box of the outer curve.
  double outer_diameter() const;
};

DomainGeometry assemble_domain(ParamBoundary outer, std::vector<ParamBoundary> inners);

enum class PointClass { interior, exterior, boundary };

/// Winding-number classification. Points closer than `guard` to a node are
/// `boundary`; a negative guard selects 1e-6 times the outer diameter.
PointClass classify_point(const DomainGeometry& domain, Complex z, double guard = -1.0);
bool contains(const DomainGeometry& domain, Complex z);

struct NearestBoundaryPoint {
  int component = 0;
  std::size_t node = 0;
  Complex point;
  double distance = 0.0;
  /// Largest gap between the nearest node and its two neighbours.
  double local_spacing = 0.0;
  /// Source-curve parameter of the projected point.
  double curve_param = 0.0;
};

NearestBoundaryPoint nearest_boundary_point(const DomainGeometry& domain, Complex z);
double dist_to_boundary(const DomainGeometry& domain, Complex z);

/// Distance from z to the segment [a, b].
double segment_distance(Complex z, Complex a, Complex b);

// Open-up of the segment [0, 1]: psi1 maps |w| > 1 onto the exterior of the
// segment and psi2 is its inverse on the branch with sqrt(1) = 1.
Complex open_up_psi1(Complex w);
Complex open_up_psi2(Complex z);
Complex open_up_psi2_deriv(Complex z);
Complex open_up_psi2_deriv2(Complex z);

}  // namespace mityuk
