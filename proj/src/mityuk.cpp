#include "mityuk/mityuk.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "mityuk/error.hpp"

namespace mityuk {

namespace {

double wrap_angle(double a) {
  double r = std::remainder(a, kTwoPi);
  if (r <= -kPi) r += kTwoPi;
  return r;
}

bool is_circular(double theta) { return theta == kCircularSlit; }

void check_point(const DomainGeometry& domain, Complex alpha, double guard_factor) {
  const NearestBoundaryPoint nb = nearest_boundary_point(domain, alpha);
  if (nb.distance <= guard_factor * nb.local_spacing) {
    std::ostringstream msg;
    msg << "alpha = " << alpha << " is within " << nb.distance << " of boundary "
        << nb.component;
    throw Error("point-near-boundary", msg.str());
  }
  if (classify_point(domain, alpha, 0.0) != PointClass::interior) {
    std::ostringstream msg;
    msg << "alpha = " << alpha << " is not an interior point of the domain";
    throw Error("point-not-interior", msg.str());
  }
}

// gamma on component k, written into out[0..n).
void fill_gamma(const ParamBoundary& b, Complex alpha, double theta, double* out) {
  const std::size_t n = b.size();
  if (is_circular(theta)) {
    for (std::size_t i = 0; i < n; ++i) out[i] = -std::log(std::abs(b.nodes[i] - alpha));
    return;
  }
  const Complex rot = std::polar(1.0, -theta);
  double prev_arg = 0.0;
  double shift = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Complex d = b.nodes[i] - alpha;
    const double arg = std::arg(d);
    if (i > 0) {
      const double jump = arg - prev_arg;
      if (jump > kPi) shift -= kTwoPi;
      else if (jump < -kPi) shift += kTwoPi;
    }
    prev_arg = arg;
    const double unwrapped = arg + shift;
    if (theta == kRadialSlit) {
      out[i] = unwrapped;
    } else {
      out[i] = (rot * Complex(std::log(std::abs(d)), unwrapped)).imag();
    }
  }
  const double closing = std::arg(b.nodes[0] - alpha) - prev_arg;
  if (std::abs(shift + (closing > kPi ? -kTwoPi : closing < -kPi ? kTwoPi : 0.0)) > 1.0) {
    throw Error("branch-not-closed", "arg(eta - alpha) winds around boundary " +
                                         std::to_string(b.component_index));
  }
}

}  // namespace

void SlitSpec::validate(int ell) const {
  if (static_cast<int>(thetas.size()) != ell) {
    throw Error("slit-arity", "expected " + std::to_string(ell) + " slit angles, got " +
                                  std::to_string(thetas.size()));
  }
  for (double t : thetas) {
    if (!std::isfinite(t)) throw Error("invalid-theta", "slit angle is not finite");
    if (!allow_oblique && t != kCircularSlit && t != kRadialSlit) {
      throw Error("invalid-theta", "slit angles must be pi/2 (circular) or 0 (radial); "
                                   "oblique angles are experimental");
    }
  }
}

SlitSpec parse_slits(const std::string& text) {
  SlitSpec s;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item.erase(std::remove_if(item.begin(), item.end(), ::isspace), item.end());
    if (item.empty()) continue;
    if (item == "C" || item == "c") {
      s.thetas.push_back(kCircularSlit);
    } else if (item == "R" || item == "r") {
      s.thetas.push_back(kRadialSlit);
    } else {
      try {
        std::size_t used = 0;
        const double v = std::stod(item, &used);
        if (used != item.size()) throw std::invalid_argument(item);
        if (std::abs(v - kCircularSlit) < 1e-12) s.thetas.push_back(kCircularSlit);
        else if (v == 0.0) s.thetas.push_back(kRadialSlit);
        else {
          s.thetas.push_back(v);
          s.allow_oblique = true;
        }
      } catch (const std::exception&) {
        throw Error("invalid-theta", "cannot parse slit angle '" + item + "'");
      }
    }
  }
  return s;
}

RhsData build_rhs(const DomainGeometry& domain, Complex alpha, const SlitSpec& slits,
                  double guard_factor) {
  slits.validate(domain.ell());
  check_point(domain, alpha, guard_factor);
  const std::size_t total = domain.total_nodes();
  RhsData out;
  out.A.values.resize(total);
  out.A.derivs.resize(total);
  out.gamma.resize(total);
  for (int k = 0; k <= domain.ell(); ++k) {
    const ParamBoundary& b = domain.boundaries[k];
    const double theta = slits.theta(k);
    const Complex phase = std::polar(1.0, kPi / 2.0 - theta);
    const std::size_t off = domain.offset(k);
    for (std::size_t i = 0; i < b.size(); ++i) {
      out.A.values[off + i] = phase * (b.nodes[i] - alpha);
      out.A.derivs[off + i] = phase * b.first_derivs[i];
    }
    fill_gamma(b, alpha, theta, out.gamma.data() + off);
  }
  return out;
}

std::vector<Complex> boundary_map(const DomainGeometry& domain, Complex alpha,
                                  const SlitSpec& slits, const DensityAndConstants& density) {
  const std::size_t total = domain.total_nodes();
  if (static_cast<std::size_t>(density.mu.size()) != total) {
    throw Error("dimension-mismatch", "density does not match the domain");
  }
  const RhsData rhs = build_rhs(domain, alpha, slits, 0.0);
  const double c = std::exp(-density.h_means[0]);
  std::vector<Complex> phi(total);
  for (int k = 0; k <= domain.ell(); ++k) {
    const ParamBoundary& b = domain.boundaries[k];
    const std::size_t off = domain.offset(k);
    for (std::size_t i = 0; i < b.size(); ++i) {
      const std::size_t g = off + i;
      const Complex f = Complex(rhs.gamma[g] + density.h[g], density.mu[g]) / rhs.A.values[g];
      const Complex d = b.nodes[i] - alpha;
      phi[g] = c * d * std::exp(d * f);
    }
  }
  return phi;
}

BoundaryResiduals boundary_condition_residuals(const DomainGeometry& domain,
                                               const SlitSpec& slits,
                                               std::span<const Complex> phi) {
  if (phi.size() != domain.total_nodes()) {
    throw Error("dimension-mismatch", "boundary values do not match the domain");
  }
  BoundaryResiduals out;
  const int n = domain.nodes_per_component();
  for (int i = 0; i < n; ++i) {
    out.outer_modulus_error = std::max(out.outer_modulus_error, std::abs(std::abs(phi[i]) - 1.0));
  }
  for (int k = 0; k <= domain.ell(); ++k) {
    const double theta = slits.theta(k);
    const Complex rot = std::polar(1.0, -theta);
    const std::size_t off = domain.offset(k);
    std::vector<double> vals(n);
    // log Phi on a continuous branch along the component.
    double shift = 0.0, prev = 0.0;
    for (int i = 0; i < n; ++i) {
      const double a = std::arg(phi[off + i]);
      if (i > 0) {
        if (a - prev > kPi) shift -= kTwoPi;
        else if (a - prev < -kPi) shift += kTwoPi;
      }
      prev = a;
      vals[i] = (rot * Complex(std::log(std::abs(phi[off + i])), a + shift)).imag();
    }
    double mean = 0.0;
    for (double v : vals) mean += v;
    mean /= n;
    double var = 0.0;
    for (double v : vals) var += (v - mean) * (v - mean);
    out.component_sd.push_back(std::sqrt(var / n));
  }
  return out;
}

MityukResult mityuk_values(const DomainGeometry& domain, Complex alpha, const SlitSpec& slits,
                           const SolverConfig& cfg, bool with_boundary_values) {
  const RhsData rhs = build_rhs(domain, alpha, slits);
  const KernelMatrices km = assemble_kernels(domain, rhs.A);
  const DensityAndConstants dens =
      solve_density(km.N, km.M, rhs.gamma, cfg, component_layout(domain));

  MityukResult r;
  r.alpha = alpha;
  r.n = domain.nodes_per_component();
  r.h0 = dens.h_means[0];
  r.R = std::exp(r.h0);
  r.m = r.h0 / kTwoPi;
  r.c = std::exp(-r.h0);
  r.constancy_residuals = dens.h_residuals;
  r.relative_residual = dens.relative_residual;
  r.iterations = dens.iterations;
  for (int k = 1; k <= domain.ell(); ++k) {
    const double theta = slits.theta(k);
    const double Rk = r.h0 * std::sin(theta) - dens.h_means[k];
    if (is_circular(theta)) r.slit_params.push_back(std::exp(-Rk));
    else if (theta == kRadialSlit) r.slit_params.push_back(wrap_angle(Rk));
    else r.slit_params.push_back(Rk);
  }
  if (with_boundary_values) r.boundary_values = boundary_map(domain, alpha, slits, dens);
  return r;
}

// ---------------------------------------------------------------- Region

Region Region::from_curves(BoundaryCurve outer, std::vector<BoundaryCurve> inners, int n,
                           int grading_order) {
  Region r;
  r.grading_order_ = grading_order;
  r.curves_.push_back(std::move(outer));
  for (auto& c : inners) r.curves_.push_back(std::move(c));
  r.geometry_ = r.geometry_for(n);
  return r;
}

Region Region::from_geometry(DomainGeometry domain) {
  Region r;
  r.geometry_ = std::move(domain);
  return r;
}

Region Region::with_slit(const SlitDomainSpec& spec) {
  const Complex from = spec.slit_from;
  const Complex to = spec.slit_to;
  const Complex span = to - from;
  if (std::abs(span) == 0.0) throw Error("invalid-geometry", "slit has zero length");

  Region r;
  r.grading_order_ = spec.grading_order;
  r.slit_ = Slit{from, to};
  ParamBoundary phys = discretize(spec.outer, spec.n, Orientation::ccw, spec.grading_order);
  r.physical_outer_ = assemble_domain(std::move(phys), {});
  const auto& outer_nodes = r.physical_outer_.boundaries.front().nodes;
  for (Complex p : {from, to, 0.5 * (from + to)}) {
    if (winding_number(outer_nodes, p) != 1 || mityuk::dist_to_boundary(r.physical_outer_, p) == 0.0)
      throw Error("inner-outside", "the slit is not inside the outer curve");
  }

  ConformalMap map{
      [from, span](Complex z) { return open_up_psi2((z - from) / span); },
      [from, span](Complex z) { return open_up_psi2_deriv((z - from) / span) / span; },
      [from, span](Complex z) { return open_up_psi2_deriv2((z - from) / span) / (span * span); }};
  r.curves_.push_back(mapped_curve(spec.outer, map));
  r.curves_.push_back(circle_curve(0.0, 1.0));
  r.geometry_ = r.geometry_for(spec.n);
  return r;
}

DomainGeometry Region::geometry_for(int n, std::optional<Complex> refine_at) const {
  if (curves_.empty()) {
    if (n == geometry_.nodes_per_component() && !refine_at) return geometry_;
    throw Error("refinement-unavailable", "region was built from a fixed mesh");
  }
  int refine_component = -1;
  double refine_param = 0.0;
  if (refine_at) {
    const Complex zc = to_computational(*refine_at);
    const NearestBoundaryPoint nb = nearest_boundary_point(geometry_, zc);
    refine_component = nb.component;
    // Polish the projection with a few Newton steps on the source curve.
    const BoundaryCurve& curve = curves_[nb.component];
    double tau = nb.curve_param;
    double best = std::abs(curve(tau).z - zc);
    for (int it = 0; it < 8; ++it) {
      const CurvePoint p = curve(tau);
      const Complex d = p.z - zc;
      const double f = (d * std::conj(p.dz)).real();
      const double df = std::norm(p.dz) + (d * std::conj(p.d2z)).real();
      if (!(df > 0.0)) break;
      const double next = std::fmod(tau - f / df + kTwoPi, kTwoPi);
      const double dist = std::abs(curve(next).z - zc);
      if (!(dist < best)) break;
      best = dist;
      tau = next;
    }
    refine_param = tau;
  }
  ParamBoundary outer;
  std::vector<ParamBoundary> inners;
  for (std::size_t k = 0; k < curves_.size(); ++k) {
    const Orientation o = k == 0 ? Orientation::ccw : Orientation::cw;
    std::vector<double> extra;
    if (static_cast<int>(k) == refine_component) extra.push_back(refine_param);
    ParamBoundary b = discretize(curves_[k], n, o, grading_order_, extra);
    if (k == 0) outer = std::move(b);
    else inners.push_back(std::move(b));
  }
  return assemble_domain(std::move(outer), std::move(inners));
}

PointClass Region::classify(Complex z, double guard) const {
  if (!slit_) return classify_point(geometry_, z, guard);
  if (guard < 0.0) guard = 1e-6 * physical_outer_.outer_diameter();
  if (segment_distance(z, slit_->from, slit_->to) <= guard) return PointClass::boundary;
  return classify_point(physical_outer_, z, guard);
}

double Region::dist_to_boundary(Complex z) const {
  if (!slit_) return mityuk::dist_to_boundary(geometry_, z);
  return std::min(mityuk::dist_to_boundary(physical_outer_, z),
                  segment_distance(z, slit_->from, slit_->to));
}

double Region::guard_ratio(Complex z) const {
  const NearestBoundaryPoint nb = nearest_boundary_point(geometry_, to_computational(z));
  return nb.distance / nb.local_spacing;
}

Complex Region::to_computational(Complex z) const {
  if (!slit_) return z;
  return open_up_psi2((z - slit_->from) / (slit_->to - slit_->from));
}

double Region::log_derivative_modulus(Complex z) const {
  if (!slit_) return 0.0;
  const Complex span = slit_->to - slit_->from;
  return std::log(std::abs(open_up_psi2_deriv((z - slit_->from) / span))) - std::log(std::abs(span));
}

double Region::derivative_argument(Complex z) const {
  if (!slit_) return 0.0;
  const Complex span = slit_->to - slit_->from;
  return std::arg(open_up_psi2_deriv((z - slit_->from) / span)) - std::arg(span);
}

std::array<double, 4> Region::bounding_box() const {
  const auto& nodes = (slit_ ? physical_outer_ : geometry_).boundaries.front().nodes;
  std::array<double, 4> box{nodes[0].real(), nodes[0].real(), nodes[0].imag(), nodes[0].imag()};
  for (const Complex& z : nodes) {
    box[0] = std::min(box[0], z.real());
    box[1] = std::max(box[1], z.real());
    box[2] = std::min(box[2], z.imag());
    box[3] = std::max(box[3], z.imag());
  }
  return box;
}

double Region::outer_diameter() const {
  return (slit_ ? physical_outer_ : geometry_).outer_diameter();
}

MityukResult mityuk_values(const Region& region, Complex alpha, const SlitSpec& slits,
                           const SolverConfig& cfg, int n, bool refine) {
  slits.validate(region.ell());
  if (region.has_slit()) region.to_computational(alpha);  // throws point-on-slit
  const PointClass pc = region.classify(alpha, 0.0);
  if (pc != PointClass::interior) {
    std::ostringstream msg;
    msg << "alpha = " << alpha << " is not an interior point of the domain";
    throw Error("point-not-interior", msg.str());
  }
  const int nodes = n > 0 ? n : region.nodes_per_component();
  const bool custom = refine || nodes != region.nodes_per_component();
  const DomainGeometry dom =
      custom ? region.geometry_for(nodes, refine ? std::optional<Complex>(alpha) : std::nullopt)
             : DomainGeometry{};
  const DomainGeometry& g = custom ? dom : region.geometry();
  MityukResult r = mityuk_values(g, region.to_computational(alpha), slits, cfg);
  r.alpha = alpha;
  if (region.has_slit()) {
    r.h0 -= region.log_derivative_modulus(alpha);
    r.R = std::exp(r.h0);
    r.m = r.h0 / kTwoPi;
    r.c = std::exp(-r.h0);
    const double shift = region.derivative_argument(alpha);
    for (int k = 1; k <= region.ell(); ++k) {
      const double theta = slits.theta(k);
      if (theta == kRadialSlit) r.slit_params[k - 1] = wrap_angle(r.slit_params[k - 1] - shift);
    }
  }
  return r;
}

MityukResult mityuk_via_openup(const SlitDomainSpec& spec, Complex alpha, const SlitSpec& slits,
                               const SolverConfig& cfg) {
  return mityuk_values(Region::with_slit(spec), alpha, slits, cfg);
}

// ------------------------------------------------------- RadiusEvaluator

RadiusEvaluator::RadiusEvaluator(const Region& region, SlitSpec slits)
    : region_(region), slits_(std::move(slits)) {
  slits_.validate(region_.ell());
  const DomainGeometry& dom = region_.geometry();
  n_ = dom.nodes_per_component();
  const std::size_t total = dom.total_nodes();

  // Reference point: the sampled interior point farthest from the boundary.
  {
    const auto& outer = dom.boundaries.front().nodes;
    double xmin = outer[0].real(), xmax = xmin, ymin = outer[0].imag(), ymax = ymin;
    for (const Complex& z : outer) {
      xmin = std::min(xmin, z.real());
      xmax = std::max(xmax, z.real());
      ymin = std::min(ymin, z.imag());
      ymax = std::max(ymax, z.imag());
    }
    double best = -1.0;
    const int m = 61;
    for (int j = 1; j < m; ++j) {
      for (int i = 1; i < m; ++i) {
        const Complex z(xmin + (xmax - xmin) * i / m, ymin + (ymax - ymin) * j / m);
        if (classify_point(dom, z, 0.0) != PointClass::interior) continue;
        const double d = mityuk::dist_to_boundary(dom, z);
        if (d > best) {
          best = d;
          reference_ = z;
        }
      }
    }
    if (best < 0.0) throw Error("invalid-geometry", "no interior reference point found");
  }

  const RhsData rhs = build_rhs(dom, reference_, slits_);
  Matrix N0 = assemble_N(dom, rhs.A);
  Matrix M0 = assemble_M(dom, rhs.A);

  eta_.resize(total);
  phase_b_.resize(total);
  ref_inv_.resize(total);
  U_.resize(total, 2);
  ell0_ = Vector::Zero(total);
  for (int k = 0; k <= dom.ell(); ++k) {
    const ParamBoundary& b = dom.boundaries[k];
    const double theta = slits_.theta(k);
    const std::size_t off = dom.offset(k);
    for (std::size_t i = 0; i < b.size(); ++i) {
      const std::size_t g = off + i;
      eta_[g] = b.nodes[i];
      phase_b_[g] = std::polar(1.0, theta) * b.first_derivs[i];
      ref_inv_[g] = 1.0 / (b.nodes[i] - reference_);
      U_(g, 0) = std::cos(theta);
      U_(g, 1) = -std::sin(theta);
      if (k == 0) ell0_[g] = std::abs(b.first_derivs[i]);
    }
  }
  ell0_ /= ell0_.sum();
  r0_ = M0.transpose() * ell0_;
  q0_ = N0.transpose() * ell0_;
  e0_ = U_.transpose() * ell0_;

  N0 = -N0;
  N0.diagonal().array() += 1.0;
  Eigen::PartialPivLU<Eigen::Ref<Matrix>> lu(N0);
  if (!(lu.rcond() > 1e-14)) throw Error("singular-system", "I - N is numerically singular");
  P_ = lu.solve(U_);
  M0 = lu.permutationP() * M0;
  lu.matrixLU().triangularView<Eigen::UnitLower>().solveInPlace(M0);
  lu.matrixLU().triangularView<Eigen::Upper>().solveInPlace(M0);
  Q_ = std::move(M0);
}

std::vector<double> RadiusEvaluator::log_radius(std::span<const Complex> alphas,
                                                double guard_factor) const {
  const DomainGeometry& dom = region_.geometry();
  const Eigen::Index total = static_cast<Eigen::Index>(dom.total_nodes());
  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> out(alphas.size(), nan);

  std::vector<std::size_t> active;
  std::vector<Complex> zc;
  for (std::size_t p = 0; p < alphas.size(); ++p) {
    if (region_.classify(alphas[p], 0.0) != PointClass::interior) continue;
    const Complex z = region_.to_computational(alphas[p]);
    const NearestBoundaryPoint nb = nearest_boundary_point(dom, z);
    if (nb.distance <= guard_factor * nb.local_spacing) continue;
    if (classify_point(dom, z, 0.0) != PointClass::interior) continue;
    active.push_back(p);
    zc.push_back(z);
  }
  if (active.empty()) return out;

  const Eigen::Index cols = static_cast<Eigen::Index>(active.size());
  Matrix G(total, cols);
  for (Eigen::Index c = 0; c < cols; ++c) {
    for (int k = 0; k <= dom.ell(); ++k) {
      fill_gamma(dom.boundaries[k], zc[c], slits_.theta(k), G.col(c).data() + dom.offset(k));
    }
  }
  const Matrix Y = Q_ * G;

  const double w = 2.0 / n_;
  Matrix V(total, 2), W(total, 2);
  for (Eigen::Index c = 0; c < cols; ++c) {
    for (Eigen::Index t = 0; t < total; ++t) {
      const Complex db = phase_b_[t] * (ref_inv_[t] - 1.0 / (eta_[t] - zc[c]));
      V(t, 0) = w * db.imag();
      V(t, 1) = w * db.real();
      W(t, 0) = w * db.real();
      W(t, 1) = -w * db.imag();
    }
    const auto gamma = G.col(c);
    const Eigen::Vector2d wg = W.transpose() * gamma;
    const Vector x = -(Y.col(c) + P_ * wg);
    const Eigen::Matrix2d C = Eigen::Matrix2d::Identity() - V.transpose() * P_;
    const Eigen::Vector2d corr = C.partialPivLu().solve(V.transpose() * x);
    const Vector mu = x + P_ * corr;
    const Eigen::Vector2d wm = W.transpose() * mu;
    const Eigen::Vector2d vg = V.transpose() * gamma;
    const double h0 = 0.5 * (r0_.dot(mu) + e0_.dot(wm) - ell0_.dot(gamma) + q0_.dot(gamma) +
                             e0_.dot(vg));
    out[active[c]] = h0 - region_.log_derivative_modulus(alphas[active[c]]);
  }
  return out;
}

double RadiusEvaluator::log_radius(Complex alpha) const {
  const Complex a[1] = {alpha};
  return log_radius(std::span<const Complex>(a, 1)).front();
}

}  // namespace mityuk
