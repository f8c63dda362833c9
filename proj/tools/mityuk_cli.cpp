// Command-line front end: single evaluations, sweeps, probes, critical
// points, lower-bound checks and the demo suite.
#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "mityuk/demos.hpp"
#include "mityuk/error.hpp"
#include "mityuk/io.hpp"

using namespace mityuk;
using nlohmann::json;

namespace {

struct Common {
  std::string domain_file;
  std::string demo;
  std::string theta;
  int n = 0;
  std::string method = "direct";
  double tol = 1e-14;
  std::string out;
  std::string format = "json";
  int workers = 0;
};

std::vector<double> numbers(const std::string& text, const char* what) {
  std::vector<double> v;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      v.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw Error("invalid-argument", std::string("bad number '") + item + "' in " + what);
    }
  }
  return v;
}

DomainSpec load(const Common& c) {
  if (!c.domain_file.empty() && !c.demo.empty())
    throw Error("invalid-argument", "give either --domain or --demo, not both");
  if (!c.domain_file.empty()) return load_domain(c.domain_file);
  if (!c.demo.empty()) return builtin_demo(c.demo);
  throw Error("invalid-argument", "a domain is required (--domain FILE or --demo NAME)");
}

SlitSpec slits_for(const DomainSpec& d, const Common& c) {
  SlitSpec s;
  if (!c.theta.empty()) {
    s = parse_slits(c.theta);
  } else if (!d.mixes.empty()) {
    s = d.mixes.front().slits;
  } else {
    s = SlitSpec::circular(d.ell());
  }
  s.validate(d.ell());
  return s;
}

SolverConfig solver_for(const Common& c) {
  SolverConfig cfg;
  if (c.method == "direct") {
    cfg.method = SolverMethod::dense_direct;
  } else if (c.method == "iterative") {
    cfg.method = SolverMethod::iterative;
  } else {
    throw Error("invalid-config", "method must be direct or iterative");
  }
  cfg.tol = c.tol;
  cfg.validate();
  return cfg;
}

json config_json(const Common& c, const DomainSpec& d, const SlitSpec& s) {
  json j{{"domain", d.id},
         {"thetas", slit_text(s)},
         {"n", c.n > 0 ? c.n : d.n},
         {"method", c.method},
         {"tol", c.tol}};
  if (!c.domain_file.empty()) j["domain_file"] = c.domain_file;
  return j;
}

void emit(const Common& c, const std::string& text) {
  if (c.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(c.out, std::ios::binary);
  if (!f) throw Error("io-error", "cannot write " + c.out);
  f << text;
}

void emit_json(const Common& c, const json& j) { emit(c, j.dump(2) + "\n"); }

GridSpec grid_for(const std::string& text, const Region& region, const DomainSpec& d) {
  if (text.empty()) return GridSpec::covering(region, d.grid_nx, d.grid_ny);
  const std::vector<double> v = numbers(text, "--grid");
  if (v.size() != 2 && v.size() != 6) throw Error("invalid-grid", "--grid takes NX,NY or NX,NY,XMIN,XMAX,YMIN,YMAX");
  GridSpec g = GridSpec::covering(region, static_cast<int>(v[0]), static_cast<int>(v[1]));
  if (v.size() == 6) {
    g.xmin = v[2];
    g.xmax = v[3];
    g.ymin = v[4];
    g.ymax = v[5];
  }
  g.validate();
  return g;
}

ScalarField field_for(const Common& c, const DomainSpec& d, const Region& region, const SlitSpec& s,
                      const GridSpec& grid, std::unique_ptr<RadiusEvaluator>* keep = nullptr) {
  SweepOptions so;
  so.workers = c.workers;
  so.domain_id = d.id;
  if (c.method == "iterative") return sweep_direct(region, s, grid, solver_for(c), so);
  auto ev = std::make_unique<RadiusEvaluator>(region, s);
  ScalarField f = sweep(*ev, grid, so);
  if (keep) *keep = std::move(ev);
  return f;
}

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--domain", c.domain_file, "Domain JSON file");
  sub->add_option("--demo", c.demo, "Built-in demo domain");
  sub->add_option("--theta", c.theta, "Slit angles: C, R or radians, comma separated");
  sub->add_option("--n", c.n, "Nodes per boundary component");
  sub->add_option("--method", c.method, "direct or iterative")->check(CLI::IsMember({"direct", "iterative"}));
  sub->add_option("--tol", c.tol, "Solver tolerance");
  sub->add_option("--out", c.out, "Output file (default stdout)");
  sub->add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  sub->add_option("--workers", c.workers, "Sweep workers (0: all cores)");
}

int fail(const std::string& code, const std::string& message) {
  json j{{"error", {{"code", code}, {"message", message}}}};
  std::cerr << j.dump() << "\n";
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mityuk radius and function of multiply connected domains"};
  app.require_subcommand(1);
  Common c;
  std::string alpha, grid, path, mix, export_dir;
  bool no_probes = false, no_critical = false, list = false, with_field = false;
  std::string demo_name;

  auto* compute = app.add_subcommand("compute", "R and m at one point");
  add_common(compute, c);
  compute->add_option("--alpha", alpha, "RE,IM")->required();

  auto* sweep_cmd = app.add_subcommand("sweep", "R on a grid");
  add_common(sweep_cmd, c);
  sweep_cmd->add_option("--grid", grid, "NX,NY[,XMIN,XMAX,YMIN,YMAX]");

  auto* probe = app.add_subcommand("probe", "R along paths towards the boundary");
  add_common(probe, c);
  probe->add_option("--path", path, "X0,Y0,X1,Y1[,COUNT[,MIN_DISTANCE]] (default: the domain's probes)");

  auto* critical = app.add_subcommand("critical", "Critical points of R and the Morse relation");
  add_common(critical, c);
  critical->add_option("--grid", grid, "NX,NY[,XMIN,XMAX,YMIN,YMAX]");

  auto* bound = app.add_subcommand("boundcheck", "Compare R with the distance to the boundary");
  add_common(bound, c);
  bound->add_option("--grid", grid, "NX,NY[,XMIN,XMAX,YMIN,YMAX]");

  auto* demo = app.add_subcommand("demo", "Run a shipped example end to end");
  demo->add_option("name", demo_name, "Demo name");
  demo->add_option("--mix", mix, "Only this slit mix");
  demo->add_option("--n", c.n, "Nodes per boundary component");
  demo->add_option("--grid", grid, "NX,NY");
  demo->add_option("--out", c.out, "Output directory for report and field files");
  demo->add_option("--workers", c.workers, "Sweep workers (0: all cores)");
  demo->add_flag("--no-probes", no_probes, "Skip boundary probes");
  demo->add_flag("--no-critical", no_critical, "Skip critical points");
  demo->add_flag("--with-field", with_field, "Embed the fields in the report");
  demo->add_flag("--list", list, "List demo names");
  demo->add_option("--export", export_dir, "Write every demo domain as JSON into this directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (compute->parsed()) {
      const DomainSpec d = load(c);
      const SlitSpec s = slits_for(d, c);
      const std::vector<double> a = numbers(alpha, "--alpha");
      if (a.size() != 2) throw Error("invalid-argument", "--alpha takes RE,IM");
      const Region region = d.region(c.n);
      const MityukResult r = mityuk_values(region, Complex(a[0], a[1]), s, solver_for(c));
      json j{{"config", config_json(c, d, s)}, {"result", to_json(r)}};
      if (c.format == "csv") {
        char buf[256];
        std::snprintf(buf, sizeof buf, "x,y,R,m\n%.17g,%.17g,%.17g,%.17g\n", a[0], a[1], r.R, r.m);
        emit(c, buf);
      } else {
        emit_json(c, j);
      }
      return 0;
    }

    if (sweep_cmd->parsed() || critical->parsed() || bound->parsed()) {
      const DomainSpec d = load(c);
      const SlitSpec s = slits_for(d, c);
      const Region region = d.region(c.n);
      const GridSpec g = grid_for(grid, region, d);
      std::unique_ptr<RadiusEvaluator> ev;
      ScalarField f = field_for(c, d, region, s, g, &ev);
      if (sweep_cmd->parsed()) {
        if (c.format == "csv") {
          std::ostringstream os;
          write_field_csv(os, f);
          emit(c, os.str());
        } else {
          emit_json(c, json{{"config", config_json(c, d, s)}, {"field", to_json(f)}});
        }
        return 0;
      }
      json j{{"config", config_json(c, d, s)}};
      if (critical->parsed()) {
        if (!ev) ev = std::make_unique<RadiusEvaluator>(region, s);
        const RadiusFunction rf = radius_function(*ev);
        const CriticalReport rep = find_critical_points(f, &rf);
        j["critical"] = to_json(rep);
        j["morse"] = to_json(morse_check(rep, region.ell()));
      } else {
        j["bound"] = to_json(lower_bound_check(f, region));
      }
      emit_json(c, j);
      return 0;
    }

    if (probe->parsed()) {
      const DomainSpec d = load(c);
      const SlitSpec s = slits_for(d, c);
      const Region region = d.region(c.n);
      std::vector<ProbeSpec> specs = d.probes;
      if (!path.empty()) {
        const std::vector<double> v = numbers(path, "--path");
        if (v.size() < 4 || v.size() > 6) throw Error("invalid-argument", "--path takes X0,Y0,X1,Y1[,COUNT[,MIN_DISTANCE]]");
        ProbeSpec p{"path", Complex(v[0], v[1]), Complex(v[2], v[3])};
        if (v.size() > 4) p.count = static_cast<int>(v[4]);
        if (v.size() > 5) p.min_distance = v[5];
        specs = {p};
      }
      if (specs.empty()) throw Error("invalid-argument", "the domain defines no probes; pass --path");
      ProbeOptions po;
      if (probe->get_option("--method")->count() > 0) po.cfg = solver_for(c);
      po.cfg.tol = c.tol;
      std::vector<ProbeResult> results;
      for (const ProbeSpec& p : specs) results.push_back(boundary_probe(region, s, p.path(), po));
      if (c.format == "csv") {
        std::ostringstream os;
        os << "label,x,y,distance,R,n,trend\n";
        char buf[160];
        for (const ProbeResult& r : results) {
          for (const ProbeSample& sm : r.samples) {
            std::snprintf(buf, sizeof buf, ",%.17g,%.17g,%.17g,%.17g,%d,", sm.alpha.real(), sm.alpha.imag(),
                          sm.distance, sm.R, sm.n);
            os << r.label << buf << to_string(r.trend) << "\n";
          }
        }
        emit(c, os.str());
      } else {
        json j{{"config", config_json(c, d, s)}, {"probes", json::array()}};
        for (const ProbeResult& r : results) j["probes"].push_back(to_json(r));
        j["directional"] = json::array();
        for (const DirectionalVerdict& v : directional_verdicts(specs, results))
          j["directional"].push_back({{"group", v.group}, {"trend", to_string(v.trend)}});
        emit_json(c, j);
      }
      return 0;
    }

    if (demo->parsed()) {
      if (list) {
        for (const DomainSpec& d : builtin_demos()) std::cout << d.id << "\n";
        return 0;
      }
      if (!export_dir.empty()) {
        std::filesystem::create_directories(export_dir);
        for (const DomainSpec& d : builtin_demos()) {
          std::ofstream f(std::filesystem::path(export_dir) / (d.id + ".json"));
          if (!f) throw Error("io-error", "cannot write into " + export_dir);
          f << to_json(d).dump(2) << "\n";
        }
        return 0;
      }
      if (demo_name.empty()) throw Error("invalid-argument", "demo name required (see --list)");
      const DomainSpec& d = builtin_demo(demo_name);
      StudyOptions so;
      so.critical = !no_critical;
      so.probes = !no_probes;
      so.workers = c.workers;
      so.n = c.n;
      if (!grid.empty()) {
        const std::vector<double> v = numbers(grid, "--grid");
        if (v.size() != 2) throw Error("invalid-grid", "demo --grid takes NX,NY");
        so.nx = static_cast<int>(v[0]);
        so.ny = static_cast<int>(v[1]);
      }
      if (!mix.empty()) {
        d.mix(mix);
        so.mixes = {mix};
      }
      const std::vector<MixStudy> studies = run_study(d, so);
      json report{{"domain", to_json(d)}, {"n", c.n > 0 ? c.n : d.n}, {"studies", json::array()}};
      for (const MixStudy& st : studies) report["studies"].push_back(to_json(st, with_field));
      if (c.out.empty()) {
        std::cout << report.dump(2) << "\n";
        return 0;
      }
      std::filesystem::create_directories(c.out);
      const std::filesystem::path dir(c.out);
      std::ofstream(dir / (d.id + "-report.json")) << report.dump(2) << "\n";
      for (const MixStudy& st : studies) {
        std::ofstream f(dir / (d.id + "-" + st.mix.label + ".csv"));
        write_field_csv(f, st.field);
      }
      std::cout << "wrote " << (dir / (d.id + "-report.json")).string() << "\n";
      return 0;
    }
  } catch (const Error& e) {
    return fail(e.code(), e.what());
  } catch (const std::exception& e) {
    return fail("internal-error", e.what());
  }
  return 0;
}
