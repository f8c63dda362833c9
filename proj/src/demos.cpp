#include "mityuk/demos.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <map>

#include "mityuk/error.hpp"
#include "mityuk/io.hpp"

namespace mityuk {

using nlohmann::json;

namespace {

Complex complex_from(const json& j) {
  if (!j.is_array() || j.size() != 2) throw Error("invalid-domain", "expected [re, im], got " + j.dump());
  return {j[0].get<double>(), j[1].get<double>()};
}

json curve_json(const CurveSpec& c) {
  json j{{"type", c.type}};
  if (c.type == "circle") {
    j["center"] = point(c.center);
    j["radius"] = c.radius;
  } else if (c.type == "polygon") {
    j["vertices"] = json::array();
    for (Complex v : c.vertices) j["vertices"].push_back(point(v));
  } else {
    j["coefficients"] = json::array();
    for (const auto& [k, a] : c.coefficients) j["coefficients"].push_back({k, a.real(), a.imag()});
  }
  return j;
}

CurveSpec curve_from(const json& j) {
  CurveSpec c;
  c.type = j.at("type").get<std::string>();
  if (c.type == "circle") {
    c.center = complex_from(j.at("center"));
    c.radius = j.at("radius").get<double>();
  } else if (c.type == "polygon") {
    for (const json& v : j.at("vertices")) c.vertices.push_back(complex_from(v));
  } else if (c.type == "fourier") {
    for (const json& t : j.at("coefficients")) {
      if (!t.is_array() || t.size() != 3) throw Error("invalid-domain", "fourier term must be [k, re, im]");
      c.coefficients.emplace_back(t[0].get<int>(), Complex(t[1].get<double>(), t[2].get<double>()));
    }
  } else {
    throw Error("invalid-domain", "unknown curve type '" + c.type + "'");
  }
  return c;
}

std::vector<Complex> square(double a) { return {{-a, -a}, {a, -a}, {a, a}, {-a, a}}; }

const std::vector<Complex> kOuterRect{{-3, -1}, {3, -1}, {3, 1}, {-3, 1}};

std::vector<SlitMix> both_kinds() {
  return {{"C", SlitSpec::circular(1)}, {"R", SlitSpec::radial(1)}};
}

std::vector<DomainSpec> make_demos() {
  std::vector<DomainSpec> d;

  DomainSpec annulus;
  annulus.id = "annulus";
  annulus.description = "Annulus 0.25 < |z| < 1.";
  annulus.outer = CurveSpec::circle(0.0, 1.0);
  annulus.inners = {CurveSpec::circle(0.0, 0.25)};
  annulus.mixes = both_kinds();
  annulus.probes = {{"outer", 0.6, 1.0, 10, 1e-4, ""},
                    {"inner", 0.5, 0.25, 10, 1e-4, ""},
                    {"outer-diagonal", Complex(0.4, 0.4), Complex(std::sqrt(0.5), std::sqrt(0.5)),
                     10, 1e-4, ""}};
  d.push_back(annulus);

  for (double a : {0.05, 0.5}) {
    DomainSpec t;
    t.id = a == 0.05 ? "two-circles-a005" : "two-circles-a05";
    t.description = "Unit disk minus the disk |z - a| <= 0.25, a = " + std::string(a == 0.05 ? "0.05." : "0.5.");
    t.outer = CurveSpec::circle(0.0, 1.0);
    t.inners = {CurveSpec::circle(a, 0.25)};
    t.mixes = both_kinds();
    t.probes = {{"outer", Complex(0, 0.6), Complex(0, 1), 10, 1e-4, ""},
                {"inner-right", 0.5 * (a + 1.25), a + 0.25, 10, 1e-4, ""},
                {"inner-left", 0.5 * (a - 1.25), a - 0.25, 10, 1e-4, ""}};
    d.push_back(t);
  }

  DomainSpec rs;
  rs.id = "rect-slit";
  rs.description = "Rectangle -3 < x < 3, -1 < y < 1 with the slit [-1, 0] removed.";
  rs.outer = CurveSpec::polygon(kOuterRect);
  rs.slit = std::pair<Complex, Complex>{-1.0, 0.0};
  rs.grading_order = 5;
  rs.mixes = both_kinds();
  rs.probes = {{"outer-top", Complex(2, 0.5), Complex(2, 1), 10, 1e-4, ""},
               {"outer-right", 2.0, 3.0, 10, 1e-4, ""},
               {"slit-middle", Complex(-0.5, 0.5), -0.5, 10, 1e-4, ""},
               {"end0-vertical", Complex(0, 0.5), 0.0, 10, 1e-4, "end0"},
               {"end0-horizontal", 0.5, 0.0, 10, 1e-4, "end0"},
               {"end1-vertical", Complex(-1, -0.5), -1.0, 10, 1e-4, "end1"},
               {"end1-horizontal", -1.5, -1.0, 10, 1e-4, "end1"}};
  d.push_back(rs);

  DomainSpec rr;
  rr.id = "rect-rect";
  rr.description = "Rectangle -3 < x < 3, -1 < y < 1 minus the rectangle 0 <= x <= 1, 0 <= y <= 0.5.";
  rr.outer = CurveSpec::polygon(kOuterRect);
  rr.inners = {CurveSpec::polygon({{0, 0}, {1, 0}, {1, 0.5}, {0, 0.5}})};
  rr.grading_order = 5;
  rr.mixes = both_kinds();
  rr.probes = {{"outer-bottom", Complex(0.5, -0.5), Complex(0.5, -1), 10, 1e-4, ""},
               {"outer-top", Complex(0.25, 0.75), Complex(0.25, 1), 10, 1e-4, ""},
               {"outer-left", -1.5, -3.0, 10, 1e-4, ""},
               {"outer-right", Complex(2, 0.25), Complex(3, 0.25), 10, 1e-4, ""},
               {"inner-bottom", Complex(0.5, -0.5), 0.5, 10, 1e-4, ""},
               {"inner-top", Complex(0.25, 0.75), Complex(0.25, 0.5), 10, 1e-4, ""},
               {"inner-left", Complex(-0.5, 0.25), Complex(0, 0.25), 10, 1e-4, ""},
               {"inner-right", Complex(1.5, 0.25), Complex(1, 0.25), 10, 1e-4, ""}};
  d.push_back(rr);

  DomainSpec tt;
  tt.id = "tri-tri";
  tt.description = "Triangle (0, 5, 4+5i) minus the triangle (3+3i, 4+3i, 3+i).";
  tt.outer = CurveSpec::polygon({0.0, 5.0, Complex(4, 5)});
  tt.inners = {CurveSpec::polygon({Complex(3, 3), Complex(4, 3), Complex(3, 1)})};
  tt.grading_order = 5;
  tt.mixes = both_kinds();
  tt.probes = {{"inner-left", Complex(2, 2), Complex(3, 2), 10, 1e-4, ""},
               {"outer-bottom", Complex(3, 0.5), 3.0, 10, 1e-4, ""}};
  d.push_back(tt);

  DomainSpec ss;
  ss.id = "sq-sq";
  ss.description = "Square with vertices +-1+-i minus the square with vertices +-0.25+-0.25i.";
  ss.outer = CurveSpec::polygon(square(1.0));
  ss.inners = {CurveSpec::polygon(square(0.25))};
  ss.grading_order = 5;
  ss.mixes = both_kinds();
  d.push_back(ss);

  DomainSpec sc = ss;
  sc.id = "sq-circle";
  sc.description = "Unit disk minus the square with vertices +-0.25+-0.25i.";
  sc.outer = CurveSpec::circle(0.0, 1.0);
  d.push_back(sc);

  DomainSpec cs = ss;
  cs.id = "circle-sq";
  cs.description = "Square with vertices +-1+-i minus the disk |z| <= 0.25.";
  cs.inners = {CurveSpec::circle(0.0, 0.25)};
  d.push_back(cs);

  const double C = kCircularSlit, R = kRadialSlit;

  DomainSpec three;
  three.id = "three-circles";
  three.description = "Disk |z| < 3 minus the disks |z - 1.5| <= 1 and |z + 1.5| <= 1.";
  three.outer = CurveSpec::circle(0.0, 3.0);
  three.inners = {CurveSpec::circle(1.5, 1.0), CurveSpec::circle(-1.5, 1.0)};
  three.mixes = {{"CC", SlitSpec::circular(2)}, {"RR", SlitSpec::radial(2)}, {"CR", SlitSpec{{C, R}}}};
  three.probes = {{"outer", Complex(0, 2), Complex(0, 3), 10, 1e-4, ""},
                  {"inner-right", 0.0, 0.5, 10, 1e-4, ""}};
  d.push_back(three);

  DomainSpec six;
  six.id = "six-circles";
  six.description = "Unit disk minus five disks of radius 0.2 centred at 0, 0.6, 0.6i, -0.6, -0.6i.";
  six.outer = CurveSpec::circle(0.0, 1.0);
  for (Complex c : {Complex(0, 0), Complex(0.6, 0), Complex(0, 0.6), Complex(-0.6, 0), Complex(0, -0.6)})
    six.inners.push_back(CurveSpec::circle(c, 0.2));
  six.mixes = {{"CCCCC", SlitSpec::circular(5)},
               {"RRRRR", SlitSpec::radial(5)},
               {"CRCRC", SlitSpec{{C, R, C, R, C}}}};
  d.push_back(six);

  DomainSpec seven;
  seven.id = "seven-circles";
  seven.description =
      "Unit disk minus six disks of radius 0.15 centred at 0.2, 0.5+0.5i, -0.1+0.5i, -0.6+0.1i, "
      "-0.4-0.5i, 0.3-0.6i.";
  seven.outer = CurveSpec::circle(0.0, 1.0);
  for (Complex c : {Complex(0.2, 0), Complex(0.5, 0.5), Complex(-0.1, 0.5), Complex(-0.6, 0.1),
                    Complex(-0.4, -0.5), Complex(0.3, -0.6)})
    seven.inners.push_back(CurveSpec::circle(c, 0.15));
  seven.mixes = {{"CCCCCC", SlitSpec::circular(6)},
                 {"RRRRRR", SlitSpec::radial(6)},
                 {"CCCRRR", SlitSpec{{C, C, C, R, R, R}}}};
  d.push_back(seven);

  for (const DomainSpec& s : d) s.validate();
  return d;
}

}  // namespace

CurveSpec CurveSpec::circle(Complex center, double radius) {
  CurveSpec c;
  c.type = "circle";
  c.center = center;
  c.radius = radius;
  return c;
}

CurveSpec CurveSpec::polygon(std::vector<Complex> vertices) {
  CurveSpec c;
  c.type = "polygon";
  c.vertices = std::move(vertices);
  return c;
}

BoundaryCurve CurveSpec::build() const {
  if (type == "circle") return circle_curve(center, radius);
  if (type == "polygon") return polygon_curve(vertices);
  if (type == "fourier") return fourier_curve(coefficients);
  throw Error("invalid-domain", "unknown curve type '" + type + "'");
}

ProbePath ProbeSpec::path() const { return make_probe_path(start, target, count, min_distance, label); }

void DomainSpec::validate() const {
  if (slit && !inners.empty()) throw Error("invalid-domain", "a slit domain cannot have inner curves");
  if (n < 8 || n % 2 != 0) throw Error("invalid-node-count", "n must be even and at least 8");
  if (grading_order < 1) throw Error("invalid-domain", "grading_order must be positive");
  if (grid_nx < 3 || grid_ny < 3) throw Error("invalid-grid", "grid needs at least 3 x 3 points");
  for (const SlitMix& m : mixes) m.slits.validate(ell());
  for (const ProbeSpec& p : probes) {
    if (p.count < 2 || !(p.min_distance > 0.0))
      throw Error("invalid-domain", "probe '" + p.label + "' needs count >= 2 and min_distance > 0");
  }
}

Region DomainSpec::region(int n_override) const {
  const int nodes = n_override > 0 ? n_override : n;
  if (slit) return Region::with_slit({outer.build(), slit->first, slit->second, nodes, grading_order});
  std::vector<BoundaryCurve> holes;
  for (const CurveSpec& c : inners) holes.push_back(c.build());
  return Region::from_curves(outer.build(), std::move(holes), nodes, grading_order);
}

const SlitMix& DomainSpec::mix(const std::string& label) const {
  for (const SlitMix& m : mixes)
    if (m.label == label) return m;
  throw Error("unknown-mix", "domain '" + id + "' has no slit mix '" + label + "'");
}

json to_json(const DomainSpec& s) {
  json j;
  j["id"] = s.id;
  j["description"] = s.description;
  j["outer"] = curve_json(s.outer);
  j["inners"] = json::array();
  for (const CurveSpec& c : s.inners) j["inners"].push_back(curve_json(c));
  if (s.slit) j["slit"] = {{"from", point(s.slit->first)}, {"to", point(s.slit->second)}};
  j["n"] = s.n;
  j["grading_order"] = s.grading_order;
  j["mixes"] = json::array();
  for (const SlitMix& m : s.mixes) j["mixes"].push_back({{"label", m.label}, {"thetas", slit_text(m.slits)}});
  j["grid"] = {{"nx", s.grid_nx}, {"ny", s.grid_ny}};
  j["probes"] = json::array();
  for (const ProbeSpec& p : s.probes) {
    json pj{{"label", p.label},
            {"start", point(p.start)},
            {"target", point(p.target)},
            {"count", p.count},
            {"min_distance", p.min_distance}};
    if (!p.group.empty()) pj["group"] = p.group;
    j["probes"].push_back(pj);
  }
  return j;
}

DomainSpec domain_from_json(const json& j) {
  DomainSpec s;
  try {
    s.id = j.value("id", std::string{});
    s.description = j.value("description", std::string{});
    s.outer = curve_from(j.at("outer"));
    if (j.contains("inners"))
      for (const json& c : j["inners"]) s.inners.push_back(curve_from(c));
    if (j.contains("slit"))
      s.slit = std::pair{complex_from(j["slit"].at("from")), complex_from(j["slit"].at("to"))};
    s.n = j.value("n", s.n);
    s.grading_order = j.value("grading_order", s.grading_order);
    if (j.contains("mixes")) {
      for (const json& m : j["mixes"]) {
        SlitMix mix{m.at("label").get<std::string>(), parse_slits(m.at("thetas").get<std::string>())};
        s.mixes.push_back(std::move(mix));
      }
    }
    if (j.contains("grid")) {
      s.grid_nx = j["grid"].value("nx", s.grid_nx);
      s.grid_ny = j["grid"].value("ny", s.grid_ny);
    }
    if (j.contains("probes")) {
      for (const json& p : j["probes"]) {
        ProbeSpec ps;
        ps.label = p.value("label", std::string{});
        ps.start = complex_from(p.at("start"));
        ps.target = complex_from(p.at("target"));
        ps.count = p.value("count", ps.count);
        ps.min_distance = p.value("min_distance", ps.min_distance);
        ps.group = p.value("group", std::string{});
        s.probes.push_back(ps);
      }
    }
  } catch (const json::exception& e) {
    throw Error("invalid-domain", e.what());
  }
  s.validate();
  return s;
}

DomainSpec load_domain(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("io-error", "cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw Error("invalid-domain", path + ": " + e.what());
  }
  return domain_from_json(j);
}

const std::vector<DomainSpec>& builtin_demos() {
  static const std::vector<DomainSpec> demos = make_demos();
  return demos;
}

const DomainSpec& builtin_demo(const std::string& id) {
  for (const DomainSpec& s : builtin_demos())
    if (s.id == id) return s;
  throw Error("unknown-demo", "no demo named '" + id + "'");
}

std::vector<DirectionalVerdict> directional_verdicts(std::span<const ProbeSpec> specs,
                                                     std::span<const ProbeResult> results) {
  std::map<std::string, std::vector<const ProbeResult*>> groups;
  for (std::size_t i = 0; i < specs.size() && i < results.size(); ++i)
    if (!specs[i].group.empty()) groups[specs[i].group].push_back(&results[i]);
  std::vector<DirectionalVerdict> out;
  for (const auto& [name, members] : groups) {
    if (members.size() < 2) continue;
    Trend t = members[0]->trend;
    for (std::size_t k = 1; k < members.size(); ++k) {
      const Trend pair = combine_directional(*members[0], *members[k]);
      if (pair == Trend::divergent_directional || pair != t) t = Trend::divergent_directional;
    }
    out.push_back({name, t});
  }
  return out;
}

std::vector<MixStudy> run_study(const DomainSpec& spec, const StudyOptions& opts) {
  spec.validate();
  const Region region = spec.region(opts.n);
  const GridSpec grid = GridSpec::covering(region, opts.nx > 0 ? opts.nx : spec.grid_nx,
                                           opts.ny > 0 ? opts.ny : spec.grid_ny);
  std::vector<MixStudy> out;
  for (const SlitMix& mix : spec.mixes) {
    if (!opts.mixes.empty() &&
        std::find(opts.mixes.begin(), opts.mixes.end(), mix.label) == opts.mixes.end())
      continue;
    const auto t0 = std::chrono::steady_clock::now();
    MixStudy s;
    s.mix = mix;
    RadiusEvaluator evaluator(region, mix.slits);
    SweepOptions so;
    so.workers = opts.workers;
    so.domain_id = spec.id;
    s.field = sweep(evaluator, grid, so);
    if (opts.critical) {
      const RadiusFunction f = radius_function(evaluator, so.mask_factor);
      s.critical = find_critical_points(s.field, &f);
      s.morse = morse_check(*s.critical, region.ell());
    }
    s.bound = lower_bound_check(s.field, region);
    if (opts.probes) {
      for (const ProbeSpec& p : spec.probes) s.probes.push_back(boundary_probe(region, mix.slits, p.path(), opts.probe));
      s.directional = directional_verdicts(spec.probes, s.probes);
    }
    s.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace mityuk
