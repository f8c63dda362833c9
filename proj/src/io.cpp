#include "mityuk/io.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace mityuk {

using nlohmann::json;

json number(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

json point(Complex z) { return json::array({number(z.real()), number(z.imag())}); }

std::string slit_text(const SlitSpec& slits) {
  std::string out;
  for (std::size_t k = 0; k < slits.thetas.size(); ++k) {
    if (k > 0) out += ',';
    const double t = slits.thetas[k];
    if (t == kCircularSlit) {
      out += 'C';
    } else if (t == kRadialSlit) {
      out += 'R';
    } else {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.17g", t);
      out += buf;
    }
  }
  return out;
}

json to_json(const MityukResult& r) {
  json j{{"alpha", point(r.alpha)},
         {"R", number(r.R)},
         {"m", number(r.m)},
         {"h0", number(r.h0)},
         {"c", number(r.c)},
         {"n", r.n},
         {"iterations", r.iterations},
         {"relative_residual", number(r.relative_residual)}};
  j["slit_params"] = json::array();
  for (double p : r.slit_params) j["slit_params"].push_back(number(p));
  j["constancy_residuals"] = json::array();
  for (double p : r.constancy_residuals) j["constancy_residuals"].push_back(number(p));
  return j;
}

json to_json(const ScalarField& f) {
  json j{{"domain", f.domain_id},
         {"thetas", slit_text(f.slits)},
         {"n", f.n},
         {"mask_factor", f.mask_factor},
         {"grid",
          {{"nx", f.grid.nx},
           {"ny", f.grid.ny},
           {"xmin", f.grid.xmin},
           {"xmax", f.grid.xmax},
           {"ymin", f.grid.ymin},
           {"ymax", f.grid.ymax}}},
         {"layout", "row-major, index = j * nx + i, x = xmin + i * dx"}};
  json values = json::array();
  json mask = json::array();
  for (std::size_t k = 0; k < f.values.size(); ++k) {
    values.push_back(f.mask[k] == Mask::interior ? number(f.values[k]) : json(nullptr));
    mask.push_back(to_string(f.mask[k]));
  }
  j["values"] = std::move(values);
  j["mask"] = std::move(mask);
  return j;
}

json to_json(const CriticalPoint& p) {
  return {{"location", point(p.location)},
          {"kind", to_string(p.kind)},
          {"hessian_eigs", {number(p.hessian_eigs[0]), number(p.hessian_eigs[1])}},
          {"gradient_norm", number(p.gradient_norm)},
          {"value", number(p.value)},
          {"iterations", p.iterations}};
}

json to_json(const CriticalReport& r) {
  json j{{"n_max", r.n_max},
         {"n_saddle", r.n_saddle},
         {"n_min", r.n_min},
         {"non_isolated", r.non_isolated},
         {"candidates", r.candidates},
         {"degenerate_count", r.degenerate.size()}};
  j["points"] = json::array();
  for (const CriticalPoint& p : r.points) j["points"].push_back(to_json(p));
  j["warnings"] = r.warnings;
  return j;
}

json to_json(const MorseReport& r) {
  return {{"n_max", r.n_max},        {"n_saddle", r.n_saddle}, {"difference", r.difference},
          {"expected", r.expected},  {"pass", r.pass},         {"notes", r.notes}};
}

json to_json(const ProbeResult& r) {
  json j{{"label", r.label},
         {"trend", to_string(r.trend)},
         {"slope", number(r.slope)},
         {"reference", number(r.reference)},
         {"truncated", r.truncated},
         {"note", r.note}};
  j["samples"] = json::array();
  for (const ProbeSample& s : r.samples) {
    j["samples"].push_back({{"alpha", point(s.alpha)},
                            {"distance", number(s.distance)},
                            {"R", number(s.R)},
                            {"n", s.n},
                            {"change", number(s.change)}});
  }
  if (!r.samples.empty()) {
    j["last_R"] = number(r.samples.back().R);
    j["last_n"] = r.samples.back().n;
  }
  return j;
}

json to_json(const BoundReport& r) {
  json j{{"checked", r.checked},
         {"min_margin", number(r.min_margin)},
         {"min_margin_at", point(r.min_margin_at)},
         {"violation_count", r.violations.size()}};
  j["violations"] = json::array();
  for (const BoundViolation& v : r.violations)
    j["violations"].push_back({{"alpha", point(v.alpha)}, {"R", number(v.R)}, {"distance", number(v.distance)}});
  return j;
}

json to_json(const MixStudy& s, bool include_field) {
  json j{{"mix", s.mix.label}, {"thetas", slit_text(s.mix.slits)}};
  std::size_t interior = 0;
  double lo = INFINITY, hi = -INFINITY;
  for (std::size_t k = 0; k < s.field.values.size(); ++k) {
    if (s.field.mask[k] != Mask::interior) continue;
    ++interior;
    lo = std::min(lo, s.field.values[k]);
    hi = std::max(hi, s.field.values[k]);
  }
  j["field_summary"] = {{"interior_points", interior}, {"min_R", number(lo)}, {"max_R", number(hi)}};
  if (include_field) j["field"] = to_json(s.field);
  if (s.critical) j["critical"] = to_json(*s.critical);
  if (s.morse) j["morse"] = to_json(*s.morse);
  j["bound"] = to_json(s.bound);
  j["probes"] = json::array();
  for (const ProbeResult& p : s.probes) j["probes"].push_back(to_json(p));
  j["directional"] = json::array();
  for (const DirectionalVerdict& d : s.directional)
    j["directional"].push_back({{"group", d.group}, {"trend", to_string(d.trend)}});
  j["metadata"] = {{"seconds", s.seconds}};
  return j;
}

void write_field_csv(std::ostream& os, const ScalarField& f) {
  os << "x,y,mask,R\n";
  char buf[96];
  for (int j = 0; j < f.grid.ny; ++j) {
    for (int i = 0; i < f.grid.nx; ++i) {
      const Complex z = f.grid.point(i, j);
      const std::size_t k = f.index(i, j);
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,", z.real(), z.imag());
      os << buf << to_string(f.mask[k]) << ',';
      if (f.mask[k] == Mask::interior && std::isfinite(f.values[k])) {
        std::snprintf(buf, sizeof buf, "%.17g", f.values[k]);
        os << buf;
      }
      os << '\n';
    }
  }
}

}  // namespace mityuk
