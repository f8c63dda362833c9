#include "mityuk/analysis.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <atomic>
#include <cmath>
#include <sstream>
#include <mutex>
#include <thread>

#include "mityuk/error.hpp"

namespace mityuk {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

int resolve_workers(int workers) {
  if (workers > 0) return workers;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

// Runs task(row) for every row on `workers` threads.
template <class Task>
void for_each_row(int rows, int workers, Task task) {
  workers = std::min(workers, rows);
  if (workers <= 1) {
    for (int r = 0; r < rows; ++r) task(r);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  std::exception_ptr failure;
  std::mutex failure_mutex;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int r = next++; r < rows; r = next++) {
        try {
          task(r);
        } catch (...) {
          std::lock_guard<std::mutex> lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

ScalarField empty_field(const GridSpec& grid, const SlitSpec& slits, const SweepOptions& opts,
                        int n) {
  grid.validate();
  ScalarField f;
  f.grid = grid;
  f.values.assign(static_cast<std::size_t>(grid.nx) * grid.ny, kNaN);
  f.mask.assign(f.values.size(), Mask::exterior);
  f.domain_id = opts.domain_id;
  f.slits = slits;
  f.n = n;
  f.mask_factor = opts.mask_factor;
  return f;
}

Mask classify_for_sweep(const Region& region, Complex z, double mask_factor) {
  switch (region.classify(z)) {
    case PointClass::exterior:
      return Mask::exterior;
    case PointClass::boundary:
      return Mask::boundary_guard;
    case PointClass::interior:
      break;
  }
  return region.guard_ratio(z) < mask_factor ? Mask::boundary_guard : Mask::interior;
}

struct Stencil {
  double value = kNaN;
  Eigen::Vector2d grad;
  Eigen::Matrix2d hess;
  bool ok = false;
};

// Central differences at every centre: gradient with step dg, Hessian with
// step dh. One call of f for the whole batch.
std::vector<Stencil> evaluate_stencils(const RadiusFunction& f, std::span<const Complex> centres,
                                       double dg, double dh) {
  const Complex ex(1.0, 0.0), ey(0.0, 1.0);
  constexpr int kPoints = 13;
  std::vector<Complex> pts;
  pts.reserve(centres.size() * kPoints);
  for (Complex z : centres) {
    for (Complex p : {z, z + dg * ex, z - dg * ex, z + dg * ey, z - dg * ey, z + dh * ex,
                      z - dh * ex, z + dh * ey, z - dh * ey, z + dh * (ex + ey),
                      z + dh * (ex - ey), z - dh * (ex - ey), z - dh * (ex + ey)})
      pts.push_back(p);
  }
  const std::vector<double> all = pts.empty() ? std::vector<double>{} : f(pts);
  std::vector<Stencil> out(centres.size());
  for (std::size_t c = 0; c < centres.size(); ++c) {
    const double* v = all.data() + c * kPoints;
    Stencil& s = out[c];
    if (!std::all_of(v, v + kPoints, [](double x) { return std::isfinite(x); })) continue;
    s.value = v[0];
    s.grad << (v[1] - v[2]) / (2 * dg), (v[3] - v[4]) / (2 * dg);
    const double fxx = (v[5] - 2 * v[0] + v[6]) / (dh * dh);
    const double fyy = (v[7] - 2 * v[0] + v[8]) / (dh * dh);
    const double fxy = (v[9] - v[10] - v[11] + v[12]) / (4 * dh * dh);
    s.hess << fxx, fxy, fxy, fyy;
    s.ok = true;
  }
  return out;
}

CriticalKind classify_eigs(double l1, double l2, double degenerate_scale, double ratio) {
  const double lo = std::min(std::abs(l1), std::abs(l2)), hi = std::max(std::abs(l1), std::abs(l2));
  if (lo < degenerate_scale || lo < ratio * hi) return CriticalKind::degenerate;
  if (l1 < 0 && l2 < 0) return CriticalKind::maximum;
  if (l1 > 0 && l2 > 0) return CriticalKind::minimum;
  return CriticalKind::saddle;
}

std::string format_point(Complex z) {
  std::ostringstream s;
  s.precision(6);
  s << "(" << z.real() << ", " << z.imag() << ")";
  return s.str();
}

}  // namespace

std::string to_string(Mask m) {
  switch (m) {
    case Mask::interior: return "interior";
    case Mask::exterior: return "exterior";
    case Mask::boundary_guard: return "boundary-guard";
    case Mask::failed: return "failed";
  }
  return "unknown";
}

std::string to_string(CriticalKind k) {
  switch (k) {
    case CriticalKind::maximum: return "maximum";
    case CriticalKind::saddle: return "saddle";
    case CriticalKind::minimum: return "minimum";
    case CriticalKind::degenerate: return "degenerate";
  }
  return "unknown";
}

std::string to_string(Trend t) {
  switch (t) {
    case Trend::to_zero: return "to_zero";
    case Trend::to_infinity: return "to_infinity";
    case Trend::finite: return "finite";
    case Trend::divergent_directional: return "divergent-directional";
  }
  return "unknown";
}

GridSpec GridSpec::covering(const Region& region, int nx, int ny) {
  const auto box = region.bounding_box();
  return GridSpec{nx, ny, box[0], box[1], box[2], box[3]};
}

Complex GridSpec::point(int i, int j) const {
  return {xmin + (xmax - xmin) * i / (nx - 1), ymin + (ymax - ymin) * j / (ny - 1)};
}

void GridSpec::validate() const {
  if (nx < 3 || ny < 3) throw Error("invalid-grid", "grid needs at least 3 points per axis");
  if (!(xmax > xmin) || !(ymax > ymin)) throw Error("invalid-grid", "empty grid bounding box");
}

ScalarField sweep(const RadiusEvaluator& evaluator, const GridSpec& grid,
                  const SweepOptions& opts) {
  const Region& region = evaluator.region();
  ScalarField f = empty_field(grid, evaluator.slits(), opts, region.nodes_per_component());
  for_each_row(grid.ny, resolve_workers(opts.workers), [&](int j) {
    std::vector<Complex> pts;
    std::vector<int> cols;
    for (int i = 0; i < grid.nx; ++i) {
      const Complex z = grid.point(i, j);
      const Mask m = classify_for_sweep(region, z, opts.mask_factor);
      f.mask[f.index(i, j)] = m;
      if (m == Mask::interior) {
        pts.push_back(z);
        cols.push_back(i);
      }
    }
    if (pts.empty()) return;
    const std::vector<double> logs = evaluator.log_radius(pts);
    for (std::size_t p = 0; p < pts.size(); ++p) {
      const std::size_t idx = f.index(cols[p], j);
      const double R = std::exp(logs[p]);
      if (std::isfinite(R) && R > 0.0) {
        f.values[idx] = R;
      } else {
        f.mask[idx] = Mask::failed;
      }
    }
  });
  return f;
}

ScalarField sweep_direct(const Region& region, const SlitSpec& slits, const GridSpec& grid,
                         const SolverConfig& cfg, const SweepOptions& opts) {
  ScalarField f = empty_field(grid, slits, opts, region.nodes_per_component());
  for_each_row(grid.ny, resolve_workers(opts.workers), [&](int j) {
    for (int i = 0; i < grid.nx; ++i) {
      const Complex z = grid.point(i, j);
      const std::size_t idx = f.index(i, j);
      f.mask[idx] = classify_for_sweep(region, z, opts.mask_factor);
      if (f.mask[idx] != Mask::interior) continue;
      try {
        const double R = mityuk_values(region, z, slits, cfg).R;
        if (std::isfinite(R) && R > 0.0) f.values[idx] = R;
        else f.mask[idx] = Mask::failed;
      } catch (const Error&) {
        f.mask[idx] = Mask::failed;
      }
    }
  });
  return f;
}

RadiusFunction radius_function(const RadiusEvaluator& evaluator, double mask_factor) {
  return [&evaluator, mask_factor](std::span<const Complex> pts) {
    std::vector<double> out(pts.size(), kNaN);
    std::vector<Complex> ok;
    std::vector<std::size_t> where;
    for (std::size_t p = 0; p < pts.size(); ++p) {
      if (evaluator.region().classify(pts[p]) != PointClass::interior) continue;
      if (evaluator.region().guard_ratio(pts[p]) < mask_factor) continue;
      ok.push_back(pts[p]);
      where.push_back(p);
    }
    if (ok.empty()) return out;
    const std::vector<double> logs = evaluator.log_radius(ok);
    for (std::size_t q = 0; q < ok.size(); ++q) out[where[q]] = std::exp(logs[q]);
    return out;
  };
}

CriticalReport find_critical_points(const ScalarField& field, const RadiusFunction* f,
                                    const CriticalOptions& opts) {
  const GridSpec& g = field.grid;
  const double dx = g.dx(), dy = g.dy();
  const double h = std::min(dx, dy);
  CriticalReport report;

  double fmin = std::numeric_limits<double>::infinity(), fmax = -fmin;
  for (std::size_t k = 0; k < field.values.size(); ++k) {
    if (field.mask[k] != Mask::interior) continue;
    fmin = std::min(fmin, field.values[k]);
    fmax = std::max(fmax, field.values[k]);
  }
  if (!(fmax > fmin)) return report;
  const double range = fmax - fmin;
  const double grad_tol = opts.gradient_tol * range;
  const double degenerate_scale = opts.degenerate_tol * range / (h * h);

  auto full_stencil = [&](int i, int j) {
    for (int b = -1; b <= 1; ++b)
      for (int a = -1; a <= 1; ++a)
        if (!field.valid(i + a, j + b)) return false;
    return true;
  };

  // Candidate generation on the grid.
  std::vector<Complex> candidates;
  const std::array<std::pair<int, int>, 8> ring{{{1, 0}, {1, 1}, {0, 1}, {-1, 1},
                                                 {-1, 0}, {-1, -1}, {0, -1}, {1, -1}}};
  for (int j = 1; j + 1 < g.ny; ++j) {
    for (int i = 1; i + 1 < g.nx; ++i) {
      if (!full_stencil(i, j)) continue;
      const double c = field.at(i, j);
      int above = 0, below = 0, changes = 0;
      for (std::size_t r = 0; r < ring.size(); ++r) {
        const double d0 = field.at(i + ring[r].first, j + ring[r].second) - c;
        const auto& nx = ring[(r + 1) % ring.size()];
        const double d1 = field.at(i + nx.first, j + nx.second) - c;
        if (d0 > 0) ++above;
        if (d0 < 0) ++below;
        if ((d0 > 0) != (d1 > 0)) ++changes;
      }
      if (above == 8 || below == 8 || changes >= 4) candidates.push_back(g.point(i, j));
    }
  }
  if (opts.refine == Refine::local) {
    auto gradient = [&](int i, int j, Eigen::Vector2d& out) {
      if (!full_stencil(i, j)) return false;
      out << (field.at(i + 1, j) - field.at(i - 1, j)) / (2 * dx),
          (field.at(i, j + 1) - field.at(i, j - 1)) / (2 * dy);
      return true;
    };
    for (int j = 1; j + 2 < g.ny; ++j) {
      for (int i = 1; i + 2 < g.nx; ++i) {
        std::array<Eigen::Vector2d, 4> gr;
        if (!gradient(i, j, gr[0]) || !gradient(i + 1, j, gr[1]) || !gradient(i, j + 1, gr[2]) ||
            !gradient(i + 1, j + 1, gr[3]))
          continue;
        bool sx = false, sy = false;
        for (int a = 0; a < 4; ++a)
          for (int b = a + 1; b < 4; ++b) {
            sx = sx || gr[a][0] * gr[b][0] <= 0;
            sy = sy || gr[a][1] * gr[b][1] <= 0;
          }
        if (sx && sy) candidates.push_back(g.point(i, j) + Complex(0.5 * dx, 0.5 * dy));
      }
    }
  }
  report.candidates = static_cast<int>(candidates.size());

  std::vector<CriticalPoint> found;
  if (opts.refine == Refine::none || f == nullptr) {
    for (Complex z : candidates) {
      const int i = static_cast<int>(std::lround((z.real() - g.xmin) / dx));
      const int j = static_cast<int>(std::lround((z.imag() - g.ymin) / dy));
      Eigen::Matrix2d H;
      const double c = field.at(i, j);
      H(0, 0) = (field.at(i + 1, j) - 2 * c + field.at(i - 1, j)) / (dx * dx);
      H(1, 1) = (field.at(i, j + 1) - 2 * c + field.at(i, j - 1)) / (dy * dy);
      H(0, 1) = H(1, 0) = (field.at(i + 1, j + 1) - field.at(i + 1, j - 1) -
                           field.at(i - 1, j + 1) + field.at(i - 1, j - 1)) /
                          (4 * dx * dy);
      Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(H);
      CriticalPoint cp;
      cp.location = z;
      cp.value = c;
      cp.gradient_norm = std::hypot((field.at(i + 1, j) - field.at(i - 1, j)) / (2 * dx),
                                    (field.at(i, j + 1) - field.at(i, j - 1)) / (2 * dy));
      cp.hessian_eigs = {es.eigenvalues()[0], es.eigenvalues()[1]};
      cp.kind = classify_eigs(cp.hessian_eigs[0], cp.hessian_eigs[1], degenerate_scale, opts.degenerate_ratio);
      found.push_back(cp);
    }
  } else {
    const double dg = 1e-3 * h;
    const double dh = 1e-2 * h;
    // Newton on the finite-difference gradient, all candidates in lockstep:
    // one batched evaluation per round.
    struct Track {
      Complex start, best_z;
      Stencil best;
      Eigen::Vector2d step = Eigen::Vector2d::Zero();
      int halving = 0;
      int iterations = 0;
      bool active = true;
    };
    auto newton_step = [&](const Stencil& s) {
      Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(s.hess);
      Eigen::Vector2d step = Eigen::Vector2d::Zero();
      for (int e = 0; e < 2; ++e) {
        const double lam = es.eigenvalues()[e];
        const double top = std::max(std::abs(es.eigenvalues()[0]), std::abs(es.eigenvalues()[1]));
        if (std::abs(lam) < degenerate_scale || std::abs(lam) < opts.degenerate_ratio * top) continue;
        const Eigen::Vector2d v = es.eigenvectors().col(e);
        step -= v * (v.dot(s.grad) / lam);
      }
      if (step.norm() > h) step *= h / step.norm();
      return step;
    };

    int dropped_near_mask = 0;
    std::vector<Track> tracks;
    {
      const std::vector<Stencil> first = evaluate_stencils(*f, candidates, dg, dh);
      for (std::size_t c = 0; c < candidates.size(); ++c) {
        if (!first[c].ok) {
          ++dropped_near_mask;
          continue;
        }
        Track t;
        t.start = t.best_z = candidates[c];
        t.best = first[c];
        t.step = newton_step(t.best);
        tracks.push_back(t);
      }
    }
    for (;;) {
      std::vector<Complex> trials;
      std::vector<std::size_t> owners;
      for (std::size_t k = 0; k < tracks.size(); ++k) {
        Track& t = tracks[k];
        while (t.active) {
          if (t.best.grad.norm() <= grad_tol || t.iterations >= opts.max_iter || t.halving >= 6) {
            t.active = false;
            break;
          }
          const Eigen::Vector2d st = t.step * std::ldexp(1.0, -t.halving);
          const Complex trial = t.best_z + Complex(st[0], st[1]);
          if (std::abs(trial - t.start) > 3 * h) {
            ++t.halving;
            continue;
          }
          trials.push_back(trial);
          owners.push_back(k);
          break;
        }
      }
      if (trials.empty()) break;
      const std::vector<Stencil> res = evaluate_stencils(*f, trials, dg, dh);
      for (std::size_t q = 0; q < trials.size(); ++q) {
        Track& t = tracks[owners[q]];
        if (res[q].ok && res[q].grad.norm() < t.best.grad.norm()) {
          t.best = res[q];
          t.best_z = trials[q];
          ++t.iterations;
          t.halving = 0;
          t.step = newton_step(t.best);
        } else {
          ++t.halving;
        }
      }
    }
    for (const Track& t : tracks) {
      if (t.best.grad.norm() > grad_tol) continue;  // not a critical point nearby
      Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(t.best.hess);
      CriticalPoint cp;
      cp.location = t.best_z;
      cp.value = t.best.value;
      cp.gradient_norm = t.best.grad.norm();
      cp.hessian_eigs = {es.eigenvalues()[0], es.eigenvalues()[1]};
      cp.kind = classify_eigs(cp.hessian_eigs[0], cp.hessian_eigs[1], degenerate_scale, opts.degenerate_ratio);
      cp.iterations = t.iterations;
      found.push_back(cp);
    }
    if (dropped_near_mask > 0) {
      report.warnings.push_back(std::to_string(dropped_near_mask) +
                                " candidate(s) too close to the mask boundary were dropped");
    }
  }

  // Deduplicate: keep the smallest gradient within half a grid spacing.
  std::sort(found.begin(), found.end(), [](const CriticalPoint& a, const CriticalPoint& b) {
    return a.gradient_norm < b.gradient_norm;
  });
  std::vector<CriticalPoint> unique;
  for (const CriticalPoint& cp : found) {
    bool dup = false;
    for (const CriticalPoint& u : unique) dup = dup || std::abs(u.location - cp.location) < 0.5 * h;
    if (!dup) unique.push_back(cp);
  }
  std::sort(unique.begin(), unique.end(), [](const CriticalPoint& a, const CriticalPoint& b) {
    if (a.location.imag() != b.location.imag()) return a.location.imag() < b.location.imag();
    return a.location.real() < b.location.real();
  });
  for (const CriticalPoint& cp : unique) {
    switch (cp.kind) {
      case CriticalKind::maximum: ++report.n_max; break;
      case CriticalKind::saddle: ++report.n_saddle; break;
      case CriticalKind::minimum:
        ++report.n_min;
        report.warnings.push_back("local minimum at " + format_point(cp.location));
        break;
      case CriticalKind::degenerate: break;
    }
    if (cp.kind == CriticalKind::degenerate) report.degenerate.push_back(cp);
    else report.points.push_back(cp);
  }
  report.non_isolated = !report.degenerate.empty();
  return report;
}

MorseReport morse_check(const CriticalReport& report, int ell) {
  MorseReport m;
  m.n_max = report.n_max;
  m.n_saddle = report.n_saddle;
  m.difference = m.n_max - m.n_saddle;
  m.expected = 1 - ell;
  m.pass = m.difference == m.expected && !report.non_isolated;
  if (report.non_isolated) {
    m.notes.push_back("non-isolated critical set found; the count relation does not apply");
  }
  if (m.n_max == 0) m.notes.push_back("no local maximum found");
  if (report.n_min > 0) m.notes.push_back("local minima found");
  return m;
}

ProbePath make_probe_path(Complex start, Complex target, int count, double min_distance,
                          std::string label) {
  if (count < 2) throw Error("invalid-path", "a probe path needs at least 2 points");
  const double d0 = std::abs(start - target);
  if (!(min_distance > 0.0 && min_distance < d0))
    throw Error("invalid-path", "min_distance must lie in (0, |start - target|)");
  ProbePath p;
  p.label = std::move(label);
  p.target = target;
  const Complex dir = (start - target) / d0;
  for (int k = 0; k < count; ++k) {
    const double d = d0 * std::pow(min_distance / d0, static_cast<double>(k) / (count - 1));
    p.points.push_back(target + d * dir);
  }
  return p;
}

Trend classify_trend(std::span<const ProbeSample> samples, double reference,
                     const ProbeOptions& opts, double* slope_out) {
  if (samples.size() < 2) {
    if (slope_out) *slope_out = kNaN;
    return Trend::finite;
  }
  const std::size_t k = std::min<std::size_t>(samples.size(), std::max(2, opts.fit_points));
  const auto tail = samples.subspan(samples.size() - k);
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const ProbeSample& s : tail) {
    const double x = std::log(s.distance), y = std::log(s.R);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double slope = (k * sxy - sx * sy) / (k * sxx - sx * sx);
  if (slope_out) *slope_out = slope;
  const double last = samples.back().R;
  if (slope >= opts.slope_threshold && last < opts.zero_ratio * reference) return Trend::to_zero;
  if (slope <= -opts.slope_threshold && last > opts.infinity_ratio * reference)
    return Trend::to_infinity;
  return Trend::finite;
}

ProbeResult boundary_probe(const Region& region, const SlitSpec& slits, const ProbePath& path,
                           const ProbeOptions& opts) {
  ProbeResult out;
  out.label = path.label;
  int n_next = opts.n_start;
  for (Complex alpha : path.points) {
    if (region.classify(alpha, 0.0) != PointClass::interior) {
      out.truncated = true;
      out.note = "path left the domain at " + format_point(alpha);
      break;
    }
    try {
      int n = n_next;
      double prev = mityuk_values(region, alpha, slits, opts.cfg, n, true).R;
      double change = kNaN;
      bool accepted = false;
      while (2 * n <= opts.n_max) {
        n *= 2;
        const double next = mityuk_values(region, alpha, slits, opts.cfg, n, true).R;
        change = std::abs(next / prev - 1.0);
        prev = next;
        if (change < opts.accept_tol) {
          accepted = true;
          break;
        }
      }
      if (!accepted) {
        out.truncated = true;
        out.note = "no converged value at " + format_point(alpha) + " with n <= " +
                   std::to_string(opts.n_max);
        break;
      }
      out.samples.push_back({alpha, region.dist_to_boundary(alpha), prev, n, change});
      n_next = std::max(opts.n_start, n / 2);
    } catch (const Error& e) {
      out.truncated = true;
      out.note = std::string(e.code()) + ": " + e.what();
      break;
    }
  }
  if (out.samples.empty()) {
    out.reference = kNaN;
    out.slope = kNaN;
    return out;
  }
  out.reference = std::isnan(opts.reference) ? out.samples.front().R : opts.reference;
  out.trend = classify_trend(out.samples, out.reference, opts, &out.slope);
  return out;
}

Trend combine_directional(const ProbeResult& a, const ProbeResult& b, double tol) {
  if (a.trend == b.trend && a.trend != Trend::finite) return a.trend;
  if (a.trend == Trend::finite && b.trend == Trend::finite && !a.samples.empty() &&
      !b.samples.empty()) {
    const double ra = a.samples.back().R, rb = b.samples.back().R;
    return std::abs(ra - rb) > tol * std::max(ra, rb) ? Trend::divergent_directional
                                                       : Trend::finite;
  }
  return Trend::divergent_directional;
}

BoundReport lower_bound_check(const ScalarField& field, const Region& region) {
  BoundReport r;
  for (int j = 0; j < field.grid.ny; ++j) {
    for (int i = 0; i < field.grid.nx; ++i) {
      if (!field.valid(i, j)) continue;
      const Complex z = field.grid.point(i, j);
      const double R = field.at(i, j);
      const double d = region.dist_to_boundary(z);
      ++r.checked;
      if (R - d < r.min_margin) {
        r.min_margin = R - d;
        r.min_margin_at = z;
      }
      if (R < d) r.violations.push_back({z, R, d});
    }
  }
  return r;
}

}  // namespace mityuk
