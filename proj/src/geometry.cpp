#include "mityuk/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "mityuk/error.hpp"

namespace mityuk {

namespace {

double wrap_param(double tau) {
  double r = std::fmod(tau, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  if (r >= kTwoPi) r = 0.0;
  return r;
}

void require_even_n(int n, int minimum) {
  if (n < minimum || n % 2 != 0) {
    throw Error("invalid-node-count", "node count must be even and at least " +
                                          std::to_string(minimum) + ", got " + std::to_string(n));
  }
}

// Split n nodes over segments proportionally to their weights (largest
// remainder), with at least `floor_count` nodes each.
std::vector<int> allocate_nodes(const std::vector<double>& weights, int n, int floor_count) {
  const int m = static_cast<int>(weights.size());
  if (m * floor_count > n) {
    throw Error("invalid-node-count", "too few nodes (" + std::to_string(n) + ") for " +
                                          std::to_string(m) + " graded segments");
  }
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  const int spare = n - m * floor_count;
  std::vector<int> counts(m, floor_count);
  std::vector<double> remainders(m);
  int used = 0;
  for (int j = 0; j < m; ++j) {
    const double share = spare * weights[j] / total;
    const int whole = static_cast<int>(std::floor(share));
    counts[j] += whole;
    used += whole;
    remainders[j] = share - whole;
  }
  std::vector<int> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return remainders[a] > remainders[b]; });
  for (int r = 0; r < spare - used; ++r) ++counts[order[r % m]];
  return counts;
}

bool segments_cross(Complex a, Complex b, Complex c, Complex d) {
  auto orient = [](Complex p, Complex q, Complex r) {
    return (q.real() - p.real()) * (r.imag() - p.imag()) -
           (q.imag() - p.imag()) * (r.real() - p.real());
  };
  const double d1 = orient(c, d, a);
  const double d2 = orient(c, d, b);
  const double d3 = orient(a, b, c);
  const double d4 = orient(a, b, d);
  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0)))
    return true;
  auto on_segment = [](Complex p, Complex q, Complex r) {
    return std::min(p.real(), q.real()) <= r.real() && r.real() <= std::max(p.real(), q.real()) &&
           std::min(p.imag(), q.imag()) <= r.imag() && r.imag() <= std::max(p.imag(), q.imag());
  };
  if (d1 == 0 && on_segment(c, d, a)) return true;
  if (d2 == 0 && on_segment(c, d, b)) return true;
  if (d3 == 0 && on_segment(a, b, c)) return true;
  if (d4 == 0 && on_segment(a, b, d)) return true;
  return false;
}

}  // namespace

BoundaryCurve::BoundaryCurve(Evaluator eval, std::vector<double> corners, std::string kind)
    : eval_(std::move(eval)), corners_(std::move(corners)), kind_(std::move(kind)) {
  for (double& c : corners_) c = wrap_param(c);
  std::sort(corners_.begin(), corners_.end());
}

BoundaryCurve circle_curve(Complex center, double radius) {
  if (!(radius > 0.0)) throw Error("invalid-geometry", "circle radius must be positive");
  return BoundaryCurve(
      [center, radius](double t) {
        const Complex e = std::polar(1.0, t);
        return CurvePoint{center + radius * e, Complex(0, radius) * e, -radius * e};
      },
      {}, "circle");
}

BoundaryCurve fourier_curve(std::vector<std::pair<int, Complex>> coefficients) {
  if (coefficients.empty()) throw Error("invalid-geometry", "empty Fourier curve");
  return BoundaryCurve(
      [coefficients = std::move(coefficients)](double t) {
        CurvePoint p{};
        for (const auto& [k, c] : coefficients) {
          const Complex e = c * std::polar(1.0, k * t);
          p.z += e;
          p.dz += Complex(0, k) * e;
          p.d2z += -static_cast<double>(k) * k * e;
        }
        return p;
      },
      {}, "parametric");
}

BoundaryCurve polygon_curve(std::vector<Complex> vertices) {
  const std::size_t m = vertices.size();
  if (m < 3) throw Error("invalid-geometry", "polygon needs at least 3 vertices");
  std::vector<double> cumulative(m + 1, 0.0);
  for (std::size_t k = 0; k < m; ++k) {
    const double len = std::abs(vertices[(k + 1) % m] - vertices[k]);
    if (len == 0.0) throw Error("invalid-geometry", "polygon has a zero-length side");
    cumulative[k + 1] = cumulative[k] + len;
  }
  const double perimeter = cumulative[m];
  std::vector<double> corners(m);
  for (std::size_t k = 0; k < m; ++k) corners[k] = kTwoPi * cumulative[k] / perimeter;

  return BoundaryCurve(
      [vertices = std::move(vertices), corners, perimeter](double t) {
        t = wrap_param(t);
        const std::size_t m = vertices.size();
        auto it = std::upper_bound(corners.begin(), corners.end(), t);
        std::size_t k = static_cast<std::size_t>(it - corners.begin()) - 1;
        const Complex a = vertices[k];
        const Complex b = vertices[(k + 1) % m];
        const double t0 = corners[k];
        const double t1 = (k + 1 < m) ? corners[k + 1] : kTwoPi;
        const Complex slope = (b - a) / (t1 - t0);
        return CurvePoint{a + slope * (t - t0), slope, Complex{}};
      },
      corners, "polygon");
}

BoundaryCurve mapped_curve(BoundaryCurve base, ConformalMap map) {
  std::vector<double> corners = base.corners();
  std::string kind = "mapped-" + base.kind();
  return BoundaryCurve(
      [base = std::move(base), map = std::move(map)](double t) {
        const CurvePoint p = base(t);
        const Complex d1 = map.df(p.z);
        return CurvePoint{map.f(p.z), d1 * p.dz, map.d2f(p.z) * p.dz * p.dz + d1 * p.d2z};
      },
      std::move(corners), std::move(kind));
}

GradingValue kress_substitution(double s, int order) {
  const double p = order;
  const double c = 1.0 / p - 0.5;
  const double x = (kPi - s) / kPi;
  const double v = c * x * x * x - x / p + 0.5;
  const double dv = (-3.0 * c * x * x + 1.0 / p) / kPi;
  const double d2v = 6.0 * c * x / (kPi * kPi);
  const double u = 1.0 - v;

  const double a = std::pow(v, p);
  const double b = std::pow(u, p);
  const double da = p * std::pow(v, p - 1) * dv;
  const double db = -p * std::pow(u, p - 1) * dv;
  const double d2a = p * (p - 1) * std::pow(v, p - 2) * dv * dv + p * std::pow(v, p - 1) * d2v;
  const double d2b = p * (p - 1) * std::pow(u, p - 2) * dv * dv - p * std::pow(u, p - 1) * d2v;

  const double den = a + b;
  const double num = da * b - a * db;
  const double dnum = d2a * b - a * d2b;
  const double dden = da + db;
  return GradingValue{kTwoPi * a / den, kTwoPi * num / (den * den),
                      kTwoPi * (dnum * den - 2.0 * num * dden) / (den * den * den)};
}

ParamBoundary reversed(const ParamBoundary& b) {
  const std::size_t n = b.size();
  ParamBoundary r = b;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = (n - i) % n;
    r.nodes[i] = b.nodes[j];
    r.first_derivs[i] = -b.first_derivs[j];
    r.second_derivs[i] = b.second_derivs[j];
    r.curve_params[i] = b.curve_params[j];
  }
  return r;
}

double signed_area(std::span<const Complex> nodes) {
  double area = 0.0;
  const std::size_t n = nodes.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Complex a = nodes[i];
    const Complex b = nodes[(i + 1) % n];
    area += a.real() * b.imag() - b.real() * a.imag();
  }
  return 0.5 * area;
}

int winding_number(std::span<const Complex> nodes, Complex z) {
  int wn = 0;
  const std::size_t n = nodes.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Complex a = nodes[i];
    const Complex b = nodes[(i + 1) % n];
    const double is_left = (b.real() - a.real()) * (z.imag() - a.imag()) -
                           (z.real() - a.real()) * (b.imag() - a.imag());
    if (a.imag() <= z.imag()) {
      if (b.imag() > z.imag() && is_left > 0) ++wn;
    } else if (b.imag() <= z.imag() && is_left < 0) {
      --wn;
    }
  }
  return wn;
}

ParamBoundary discretize(const BoundaryCurve& curve, int n, Orientation orientation,
                         int grading_order, std::span<const double> extra_breaks) {
  require_even_n(n, 8);
  if (grading_order < 2) throw Error("invalid-grading", "grading order must be at least 2");

  std::vector<double> breaks = curve.corners();
  for (double b : extra_breaks) breaks.push_back(wrap_param(b));
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end(),
                           [](double a, double b) { return std::abs(a - b) < 1e-12; }),
               breaks.end());
  if (breaks.size() > 1 && kTwoPi - breaks.back() + breaks.front() < 1e-12) breaks.pop_back();

  ParamBoundary out;
  out.nodes.resize(n);
  out.first_derivs.resize(n);
  out.second_derivs.resize(n);
  out.params.resize(n);
  out.curve_params.resize(n);
  const double h = kTwoPi / n;
  for (int i = 0; i < n; ++i) out.params[i] = i * h;

  if (breaks.empty()) {
    for (int i = 0; i < n; ++i) {
      const CurvePoint p = curve(out.params[i]);
      out.nodes[i] = p.z;
      out.first_derivs[i] = p.dz;
      out.second_derivs[i] = p.d2z;
      out.curve_params[i] = out.params[i];
    }
  } else {
    const std::size_t m = breaks.size();
    std::vector<double> lengths(m);
    for (std::size_t j = 0; j < m; ++j) {
      const double next = (j + 1 < m) ? breaks[j + 1] : breaks[0] + kTwoPi;
      lengths[j] = next - breaks[j];
    }
    const std::vector<int> counts = allocate_nodes(lengths, n, 4);
    int i = 0;
    for (std::size_t j = 0; j < m; ++j) {
      const double span_sigma = kTwoPi * counts[j] / n;
      for (int k = 0; k < counts[j]; ++k, ++i) {
        const double s = kTwoPi * k / counts[j];
        const GradingValue g = kress_substitution(s, grading_order);
        const double tau = breaks[j] + lengths[j] * g.w / kTwoPi;
        const double dtau = lengths[j] / span_sigma * g.dw;
        const double d2tau = lengths[j] * kTwoPi * g.d2w / (span_sigma * span_sigma);
        const CurvePoint p = curve(wrap_param(tau));
        out.nodes[i] = p.z;
        out.first_derivs[i] = (k == 0) ? Complex{} : p.dz * dtau;
        out.second_derivs[i] = (k == 0) ? Complex{} : p.d2z * dtau * dtau + p.dz * d2tau;
        out.curve_params[i] = wrap_param(tau);
      }
    }
  }

  const bool is_ccw = signed_area(out.nodes) > 0.0;
  if (is_ccw != (orientation == Orientation::ccw)) out = reversed(out);
  return out;
}

ParamBoundary make_circle(Complex center, double radius, Orientation orientation, int n) {
  require_even_n(n, 8);
  if (!(radius > 0.0)) throw Error("invalid-geometry", "circle radius must be positive");
  const double sign = orientation == Orientation::ccw ? 1.0 : -1.0;
  ParamBoundary b;
  b.nodes.resize(n);
  b.first_derivs.resize(n);
  b.second_derivs.resize(n);
  b.params.resize(n);
  b.curve_params.resize(n);
  for (int i = 0; i < n; ++i) {
    const double t = kTwoPi * i / n;
    const Complex e = std::polar(1.0, sign * t);
    b.params[i] = t;
    b.curve_params[i] = t;
    b.nodes[i] = center + radius * e;
    b.first_derivs[i] = Complex(0, sign * radius) * e;
    b.second_derivs[i] = -radius * e;
  }
  return b;
}

ParamBoundary make_smooth_curve(const BoundaryCurve::Evaluator& fn, Orientation orientation,
                                int n) {
  ParamBoundary b = discretize(BoundaryCurve(fn, {}, "parametric"), n, orientation);
  double scale = 0.0;
  for (const Complex& d : b.first_derivs) scale = std::max(scale, std::abs(d));
  for (std::size_t i = 0; i < b.size(); ++i) {
    if (!(std::abs(b.first_derivs[i]) > 1e-14 * scale)) {
      throw Error("degenerate-parametrization",
                  "curve derivative vanishes at node " + std::to_string(i));
    }
  }
  return b;
}

ParamBoundary make_polygon(const std::vector<Complex>& vertices, Orientation orientation, int n,
                           const CornerSpec& grading) {
  const std::size_t m = vertices.size();
  if (m < 3) throw Error("invalid-geometry", "polygon needs at least 3 vertices");
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = a + 1; b < m; ++b) {
      const bool adjacent = (b == a + 1) || (a == 0 && b == m - 1);
      if (adjacent) continue;
      if (segments_cross(vertices[a], vertices[(a + 1) % m], vertices[b], vertices[(b + 1) % m]))
        throw Error("invalid-geometry", "polygon is self-intersecting");
    }
  }
  return discretize(polygon_curve(vertices), n, orientation, grading.grading_order,
                    grading.corner_params);
}

double DomainGeometry::outer_diameter() const {
  const auto& nodes = boundaries.front().nodes;
  double xmin = nodes[0].real(), xmax = xmin, ymin = nodes[0].imag(), ymax = ymin;
  for (const Complex& z : nodes) {
    xmin = std::min(xmin, z.real());
    xmax = std::max(xmax, z.real());
    ymin = std::min(ymin, z.imag());
    ymax = std::max(ymax, z.imag());
  }
  return std::hypot(xmax - xmin, ymax - ymin);
}

DomainGeometry assemble_domain(ParamBoundary outer, std::vector<ParamBoundary> inners) {
  DomainGeometry d;
  const std::size_t n = outer.size();
  if (signed_area(outer.nodes) < 0.0) outer = reversed(outer);
  outer.component_index = 0;
  d.boundaries.push_back(std::move(outer));
  for (auto& inner : inners) {
    if (inner.size() != n) {
      throw Error("node-count-mismatch", "every boundary component must have " +
                                             std::to_string(n) + " nodes");
    }
    if (signed_area(inner.nodes) > 0.0) inner = reversed(inner);
    inner.component_index = static_cast<int>(d.boundaries.size());
    d.boundaries.push_back(std::move(inner));
  }

  const auto& outer_nodes = d.boundaries.front().nodes;
  for (int k = 1; k <= d.ell(); ++k) {
    for (const Complex& z : d.boundaries[k].nodes) {
      if (winding_number(outer_nodes, z) != 1)
        throw Error("inner-outside", "boundary " + std::to_string(k) + " is not inside the outer curve");
    }
    for (int j = 1; j <= d.ell(); ++j) {
      if (j == k) continue;
      for (const Complex& z : d.boundaries[k].nodes) {
        if (winding_number(d.boundaries[j].nodes, z) != 0)
          throw Error("inner-overlap",
                      "boundaries " + std::to_string(k) + " and " + std::to_string(j) + " overlap");
      }
    }
  }
  return d;
}

double segment_distance(Complex z, Complex a, Complex b) {
  const Complex ab = b - a;
  const double len2 = std::norm(ab);
  double t = len2 > 0.0 ? ((z - a) * std::conj(ab)).real() / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return std::abs(z - (a + t * ab));
}

NearestBoundaryPoint nearest_boundary_point(const DomainGeometry& domain, Complex z) {
  NearestBoundaryPoint best;
  best.distance = std::numeric_limits<double>::infinity();
  for (const ParamBoundary& b : domain.boundaries) {
    const std::size_t n = b.size();
    for (std::size_t i = 0; i < n; ++i) {
      const Complex a = b.nodes[i];
      const Complex c = b.nodes[(i + 1) % n];
      const Complex ac = c - a;
      const double len2 = std::norm(ac);
      double t = len2 > 0.0 ? ((z - a) * std::conj(ac)).real() / len2 : 0.0;
      t = std::clamp(t, 0.0, 1.0);
      const Complex p = a + t * ac;
      const double dist = std::abs(z - p);
      if (dist < best.distance) {
        best.distance = dist;
        best.component = b.component_index;
        best.point = p;
        best.node = t < 0.5 ? i : (i + 1) % n;
        double dtau = b.curve_params[(i + 1) % n] - b.curve_params[i];
        dtau = std::remainder(dtau, kTwoPi);
        best.curve_param = b.curve_params[i] + t * dtau;
        best.curve_param = std::fmod(best.curve_param + kTwoPi, kTwoPi);
      }
    }
  }
  const ParamBoundary& b = domain.boundaries[best.component];
  const std::size_t n = b.size();
  const std::size_t i = best.node;
  best.local_spacing = std::max(std::abs(b.nodes[(i + 1) % n] - b.nodes[i]),
                                std::abs(b.nodes[i] - b.nodes[(i + n - 1) % n]));
  return best;
}

double dist_to_boundary(const DomainGeometry& domain, Complex z) {
  return nearest_boundary_point(domain, z).distance;
}

PointClass classify_point(const DomainGeometry& domain, Complex z, double guard) {
  if (guard < 0.0) guard = 1e-6 * domain.outer_diameter();
  if (dist_to_boundary(domain, z) <= guard) return PointClass::boundary;
  if (winding_number(domain.boundaries.front().nodes, z) != 1) return PointClass::exterior;
  for (int k = 1; k <= domain.ell(); ++k) {
    if (winding_number(domain.boundaries[k].nodes, z) != 0) return PointClass::exterior;
  }
  return PointClass::interior;
}

bool contains(const DomainGeometry& domain, Complex z) {
  return classify_point(domain, z) == PointClass::interior;
}

Complex open_up_psi1(Complex w) { return 0.25 * (w + 1.0 / w) + 0.5; }

Complex open_up_psi2(Complex z) {
  if (segment_distance(z, 0.0, 1.0) <= 1e-14)
    throw Error("point-on-slit", "open-up map is undefined on the segment [0, 1]");
  const Complex u = 2.0 * z - 1.0;
  return u * (1.0 + std::sqrt(1.0 - 1.0 / (u * u)));
}

Complex open_up_psi2_deriv(Complex z) {
  const Complex w = open_up_psi2(z);
  return 4.0 * w * w / (w * w - 1.0);
}

Complex open_up_psi2_deriv2(Complex z) {
  const Complex w = open_up_psi2(z);
  const Complex d = w * w - 1.0;
  const Complex dw = 4.0 * w * w / d;
  return -8.0 * w / (d * d) * dw;
}

}  // namespace mityuk
