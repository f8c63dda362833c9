// Acceptance checks 1 to 11. One PASS/FAIL line per criterion on stdout,
// supporting detail on stderr. Exit status 1 when any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mityuk/analysis.hpp"
#include "mityuk/demos.hpp"
#include "mityuk/error.hpp"
#include "mityuk/io.hpp"
#include "mityuk/kernel.hpp"
#include "mityuk/oracles.hpp"

using namespace mityuk;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass = true;
  std::string summary;
};

void detail(const char* fmt, auto... args) {
  std::fprintf(stderr, "  ");
  std::fprintf(stderr, fmt, args...);
  std::fprintf(stderr, "\n");
}

std::string fmt(const char* f, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

Region annulus_region(int n) { return builtin_demo("annulus").region(n); }

std::string point_text(Complex z) { return fmt("(%g, %g)", z.real(), z.imag()); }

double radius(const Region& r, Complex a, const SlitSpec& s) { return mityuk_values(r, a, s).R; }

Outcome criterion1() {
  const Region r = annulus_region(1024);
  Outcome o;
  double worst_err = 0.0, worst_time = 0.0;
  for (bool circular : {true, false}) {
    const SlitSpec s = circular ? SlitSpec::circular(1) : SlitSpec::radial(1);
    const auto t0 = Clock::now();
    const double R = radius(r, 0.5, s);
    const double t = seconds_since(t0);
    const double exact = circular ? oracles::annulus_R_circular(0.25, 0.5) : oracles::annulus_R_radial(0.25, 0.5);
    const double err = std::abs(R - exact) / exact;
    detail("%s: R = %.15g, oracle = %.15g, rel err = %.2e, %.2f s", circular ? "circular" : "radial", R,
           exact, err, t);
    worst_err = std::max(worst_err, err);
    worst_time = std::max(worst_time, t);
  }
  o.pass = worst_err <= 1e-10 && worst_time <= 5.0;
  o.summary = fmt("max rel err %.2e (<= 1e-10), max time %.2f s (<= 5 s)", worst_err, worst_time);
  return o;
}

Outcome criterion2() {
  const Region r = annulus_region(1024);
  const SlitSpec s = SlitSpec::circular(1);
  const double step = 1e-4;
  auto dRdr = [&](double rad) { return (radius(r, rad + step, s) - radius(r, rad - step, s)) / (2 * step); };
  const double d5 = dRdr(0.5), d4 = dRdr(0.4), d6 = dRdr(0.6);
  detail("dR/dr: r=0.4 %.6e, r=0.5 %.3e, r=0.6 %.6e", d4, d5, d6);
  Outcome o;
  o.pass = std::abs(d5) <= 1e-6 && d4 * d6 < 0.0;
  o.summary = fmt("|dR/dr(0.5)| = %.2e (<= 1e-6), signs at 0.4/0.6: %+g/%+g", std::abs(d5),
                  std::copysign(1.0, d4), std::copysign(1.0, d6));
  return o;
}

Outcome criterion3() {
  const Region r = annulus_region(1024);
  const SlitSpec s = SlitSpec::radial(1);
  const int count = 30;
  std::vector<double> R(count);
  bool decreasing = true;
  for (int k = 0; k < count; ++k) {
    const double rad = 0.26 + (0.99 - 0.26) * k / (count - 1);
    R[k] = radius(r, rad, s);
    if (k > 0 && !(R[k] < R[k - 1])) decreasing = false;
  }
  const double half = radius(r, 0.5, s);
  const double low = R.front() / half, high = R.back() / half;
  detail("R(0.26) = %.6g, R(0.5) = %.6g, R(0.99) = %.6g", R.front(), half, R.back());
  detail("oracle ratio R(0.99)/R(0.5) = %.6g",
         oracles::annulus_R_radial(0.25, 0.99) / oracles::annulus_R_radial(0.25, 0.5));
  Outcome o;
  o.pass = decreasing && low > 10.0 && high < 1e-2;
  o.summary = fmt("strictly decreasing: %s, R(0.26)/R(0.5) = %.4g (> 10), R(0.99)/R(0.5) = %.4g (< 1e-2)",
                  decreasing ? "yes" : "no", low, high);
  return o;
}

Outcome criterion4() {
  const Region r = Region::from_curves(circle_curve(0.0, 1.0), {}, 1024);
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> radial(0.0, 0.95), angle(0.0, kTwoPi);
  double worst = 0.0;
  for (int k = 0; k < 25; ++k) {
    const Complex a = std::polar(radial(rng), angle(rng));
    worst = std::max(worst, std::abs(radius(r, a, SlitSpec::circular(0)) - oracles::disk_R(a)));
  }
  Outcome o;
  o.pass = worst <= 1e-10;
  o.summary = fmt("max |R - (1 - |alpha|^2)| = %.2e over 25 points (<= 1e-10)", worst);
  return o;
}

Outcome criterion5() {
  double worst_sd = 0.0, worst_mod = 0.0;
  const std::map<std::string, std::vector<Complex>> points{
      {"annulus", {0.5, Complex(0.3, 0.4), Complex(-0.7, 0.1)}},
      {"three-circles", {Complex(0.0, 2.0), Complex(0.0, 0.3), Complex(-1.2, -1.9)}}};
  for (const auto& [id, alphas] : points) {
    const DomainSpec d = builtin_demo(id);
    const Region r = d.region(1024);
    for (const SlitMix& mix : d.mixes) {
      for (Complex a : alphas) {
        const MityukResult res = mityuk_values(r.geometry(), a, mix.slits, {}, true);
        const BoundaryResiduals b = boundary_condition_residuals(r.geometry(), mix.slits, *res.boundary_values);
        double sd = 0.0;
        for (double v : b.component_sd) sd = std::max(sd, v);
        detail("%s %s alpha=%s: max sd %.2e, ||Phi|-1| %.2e", id.c_str(), mix.label.c_str(),
               point_text(a).c_str(), sd, b.outer_modulus_error);
        worst_sd = std::max(worst_sd, sd);
        worst_mod = std::max(worst_mod, b.outer_modulus_error);
      }
    }
  }
  Outcome o;
  o.pass = worst_sd <= 1e-8 && worst_mod <= 1e-8;
  o.summary = fmt("max component sd %.2e, max ||Phi|-1| on outer curve %.2e (both <= 1e-8)", worst_sd, worst_mod);
  return o;
}

// Expected (n_max, n_saddle); with difference_only just n_max - n_saddle is fixed.
struct Expected {
  int n_max;
  int n_saddle;
  bool difference_only = false;
};

std::optional<Expected> expected_counts(const std::string& id, const std::string& mix) {
  const bool radial_doubly = mix == "R";
  if (id == "annulus") return radial_doubly ? std::optional<Expected>({0, 0}) : std::nullopt;
  if (radial_doubly) return Expected{0, 0};
  if (id == "two-circles-a005" || id == "two-circles-a05") return Expected{1, 1};
  if (id == "rect-slit" || id == "rect-rect" || id == "sq-circle" || id == "circle-sq") return Expected{4, 4};
  if (id == "tri-tri") return Expected{3, 3};
  if (id == "sq-sq") return Expected{8, 8};
  if (id == "three-circles") return mix == "CC" ? Expected{2, 3} : Expected{0, 1};
  if (id == "six-circles") return mix == "CCCCC" ? Expected{4, 8} : Expected{0, 4};
  if (id == "seven-circles") return Expected{0, 5, true};
  return std::nullopt;
}

struct StudyRecord {
  std::string id;
  int ell = 0;
  MixStudy study;
};

bool is_probe_demo(const std::string& id) {
  static const std::set<std::string> ids{"annulus", "two-circles-a005", "two-circles-a05", "rect-rect", "rect-slit"};
  return ids.count(id) > 0;
}

std::vector<StudyRecord> run_all_studies(int workers) {
  std::vector<StudyRecord> out;
  for (const DomainSpec& d : builtin_demos()) {
    StudyOptions o;
    o.workers = workers;
    o.probes = is_probe_demo(d.id);
    const auto t0 = Clock::now();
    for (MixStudy& s : run_study(d, o)) out.push_back({d.id, d.ell(), std::move(s)});
    std::fprintf(stderr, "  [study] %s done in %.0f s\n", d.id.c_str(), seconds_since(t0));
  }
  return out;
}

Outcome criterion6(const std::vector<StudyRecord>& studies) {
  int checked = 0, failed = 0;
  double slowest = 0.0;
  for (const StudyRecord& r : studies) {
    const MixStudy& s = r.study;
    slowest = std::max(slowest, s.seconds);
    const auto e = expected_counts(r.id, s.mix.label);
    if (!e) continue;
    ++checked;
    const CriticalReport& c = *s.critical;
    const bool ok = e->difference_only ? !c.non_isolated && c.n_max - c.n_saddle == e->n_max - e->n_saddle
                                       : !c.non_isolated && c.n_max == e->n_max && c.n_saddle == e->n_saddle;
    if (!ok) ++failed;
    detail("%s %-6s n_m=%d n_s=%d n_min=%d%s expected %s%d/%d  %s (%.0f s)", r.id.c_str(), s.mix.label.c_str(),
           c.n_max, c.n_saddle, c.n_min, c.non_isolated ? " non-isolated" : "",
           e->difference_only ? "difference of " : "", e->n_max, e->n_saddle, ok ? "ok" : "MISMATCH", s.seconds);
  }
  Outcome o;
  o.pass = failed == 0 && slowest <= 7200.0;
  o.summary = fmt("%d of %d demo/mix counts match; slowest study %.0f s (<= 7200 s)", checked - failed, checked, slowest);
  return o;
}

Outcome criterion7(const std::vector<StudyRecord>& studies) {
  int checked = 0, failed = 0;
  for (const StudyRecord& r : studies) {
    const CriticalReport& c = *r.study.critical;
    if (r.ell < 1 || c.non_isolated) continue;
    ++checked;
    const MorseReport m = morse_check(c, r.ell);
    if (!m.pass) {
      ++failed;
      detail("%s %s: n_m - n_s = %d, expected %d", r.id.c_str(), r.study.mix.label.c_str(), m.difference, m.expected);
    }
  }
  Outcome o;
  o.pass = failed == 0 && checked > 0;
  o.summary = fmt("n_m - n_s = 1 - ell holds in %d of %d studies with isolated critical points", checked - failed, checked);
  return o;
}

// Limit classes: outer curve and circular slits go to zero, radial slits to
// infinity; grouped end-point probes on the rect-slit radial case must disagree.
Outcome criterion8(const std::vector<StudyRecord>& studies) {
  int checked = 0, failed = 0;
  for (const StudyRecord& r : studies) {
    if (!is_probe_demo(r.id)) continue;
    const DomainSpec d = builtin_demo(r.id);
    const MixStudy& s = r.study;
    const bool radial = s.mix.slits.thetas[0] == kRadialSlit;
    for (std::size_t k = 0; k < d.probes.size(); ++k) {
      const ProbeSpec& p = d.probes[k];
      if (!p.group.empty()) continue;
      const bool outer = p.label.rfind("outer", 0) == 0;
      const Trend want = outer || !radial ? Trend::to_zero : Trend::to_infinity;
      const bool ok = s.probes[k].trend == want;
      ++checked;
      if (!ok) ++failed;
      detail("%s %s %-16s %-22s expected %-12s %s", r.id.c_str(), s.mix.label.c_str(), p.label.c_str(),
             to_string(s.probes[k].trend).c_str(), to_string(want).c_str(), ok ? "ok" : "MISMATCH");
    }
    for (const DirectionalVerdict& v : s.directional) {
      const Trend want = radial ? Trend::divergent_directional : Trend::to_zero;
      const bool ok = v.trend == want;
      ++checked;
      if (!ok) ++failed;
      detail("%s %s group %-10s %-22s expected %-12s %s", r.id.c_str(), s.mix.label.c_str(), v.group.c_str(),
             to_string(v.trend).c_str(), to_string(want).c_str(), ok ? "ok" : "MISMATCH");
    }
  }
  Outcome o;
  o.pass = failed == 0 && checked > 0;
  o.summary = fmt("%d of %d probe verdicts match the limit classes", checked - failed, checked);
  return o;
}

Outcome criterion9(const std::vector<StudyRecord>& studies) {
  std::size_t checked = 0, violations = 0;
  double margin = INFINITY;
  for (const StudyRecord& r : studies) {
    checked += r.study.bound.checked;
    violations += r.study.bound.violations.size();
    margin = std::min(margin, r.study.bound.min_margin);
  }
  Outcome o;
  o.pass = violations == 0;
  o.summary = fmt("%zu violations of R >= d(alpha, boundary) over %zu grid points, min margin %.3e", violations,
                  checked, margin);
  return o;
}

Outcome criterion10() {
  double worst = 0.0;
  for (int n : {64, 256}) {
    const Matrix K = conjugation_matrix(n);
    Vector c(n), s(n);
    for (int k = 1; k < n / 2; ++k) {
      for (int i = 0; i < n; ++i) {
        const double t = kTwoPi * ((k * i) % n) / n;
        c[i] = std::cos(t);
        s[i] = std::sin(t);
      }
      worst = std::max(worst, (K * c - s).cwiseAbs().maxCoeff());
      worst = std::max(worst, (K * s + c).cwiseAbs().maxCoeff());
    }
  }
  Outcome o;
  o.pass = worst <= 1e-13;
  o.summary = fmt("max error on cos/sin modes, n = 64 and 256: %.2e (<= 1e-13)", worst);
  return o;
}

std::string csv_of(const ScalarField& f) {
  std::ostringstream os;
  write_field_csv(os, f);
  return os.str();
}

Outcome criterion11(int workers) {
  const DomainSpec two = builtin_demo("two-circles-a05");
  const Region r = two.region();
  const RadiusEvaluator ev(r, two.mixes[0].slits);
  const GridSpec g = GridSpec::covering(r, two.grid_nx, two.grid_ny);
  std::set<std::string> outputs;
  for (int w : {1, 3, workers}) {
    SweepOptions so;
    so.workers = w;
    so.domain_id = two.id;
    outputs.insert(csv_of(sweep(ev, g, so)));
  }
  const bool identical = outputs.size() == 1;
  detail("two-circles-a05 sweeps with 1, 3 and %d workers: %s", workers, identical ? "identical" : "DIFFERENT");

  double worst = 0.0;
  for (const std::string id : {"annulus", "two-circles-a005", "two-circles-a05", "three-circles", "six-circles",
                               "seven-circles"}) {
    const DomainSpec d = builtin_demo(id);
    const Region coarse = d.region(512), fine = d.region(1024);
    std::vector<Complex> pts;
    const GridSpec grid = GridSpec::covering(fine, 7, 7);
    for (int j = 0; j < grid.ny; ++j)
      for (int i = 0; i < grid.nx; ++i)
        if (fine.classify(grid.point(i, j)) == PointClass::interior &&
            fine.dist_to_boundary(grid.point(i, j)) >= 0.02 * fine.outer_diameter())
          pts.push_back(grid.point(i, j));
    double demo_worst = 0.0;
    for (const SlitMix& mix : d.mixes) {
      const std::vector<double> a = RadiusEvaluator(coarse, mix.slits).log_radius(pts);
      const std::vector<double> b = RadiusEvaluator(fine, mix.slits).log_radius(pts);
      for (std::size_t k = 0; k < pts.size(); ++k) demo_worst = std::max(demo_worst, std::abs(std::exp(a[k]) - std::exp(b[k])));
    }
    detail("%s: max |R(512) - R(1024)| = %.2e over %zu points", id.c_str(), demo_worst, pts.size());
    worst = std::max(worst, demo_worst);
  }
  Outcome o;
  o.pass = identical && worst <= 1e-10;
  o.summary = fmt("sweeps byte-identical: %s; max |R(512) - R(1024)| on smooth demos %.2e (<= 1e-10)",
                  identical ? "yes" : "no", worst);
  return o;
}

const char* title(int k) {
  static const char* names[] = {"",
                                "annulus oracle match",
                                "critical circle",
                                "radial-slit monotonicity",
                                "disk degenerate case",
                                "boundary-map residuals",
                                "critical-point counts",
                                "Morse relation",
                                "boundary limits",
                                "lower-bound conjecture",
                                "quadrature exactness",
                                "determinism and convergence"};
  return names[k];
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance checks"};
  std::vector<int> only;
  int workers = 0;
  app.add_option("--only", only, "Run only these criteria")->check(CLI::Range(1, 11));
  app.add_option("--workers", workers, "Sweep workers (0: all cores)");
  CLI11_PARSE(app, argc, argv);
  const std::set<int> selected = only.empty() ? std::set<int>{1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11}
                                              : std::set<int>(only.begin(), only.end());

  std::vector<StudyRecord> studies;
  const bool need_studies = selected.count(6) || selected.count(7) || selected.count(8) || selected.count(9);
  bool all_pass = true;
  for (int k : selected) {
    std::fprintf(stderr, "criterion %d: %s\n", k, title(k));
    Outcome o;
    const auto t0 = Clock::now();
    try {
      if (k >= 6 && k <= 9 && studies.empty() && need_studies) studies = run_all_studies(workers);
      switch (k) {
        case 1: o = criterion1(); break;
        case 2: o = criterion2(); break;
        case 3: o = criterion3(); break;
        case 4: o = criterion4(); break;
        case 5: o = criterion5(); break;
        case 6: o = criterion6(studies); break;
        case 7: o = criterion7(studies); break;
        case 8: o = criterion8(studies); break;
        case 9: o = criterion9(studies); break;
        case 10: o = criterion10(); break;
        case 11: o = criterion11(workers); break;
      }
    } catch (const Error& e) {
      o = {false, std::string("error ") + e.code() + ": " + e.what()};
    }
    all_pass = all_pass && o.pass;
    std::printf("criterion %2d %s  %s: %s (%.0f s)\n", k, o.pass ? "PASS" : "FAIL", title(k), o.summary.c_str(),
                seconds_since(t0));
    std::fflush(stdout);
  }
  return all_pass ? 0 : 1;
}
