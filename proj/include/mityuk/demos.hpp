#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "mityuk/analysis.hpp"

namespace mityuk {

/// Serializable description of one boundary curve.
struct CurveSpec {
  std::string type = "circle";  // circle | polygon | fourier
  Complex center;
  double radius = 1.0;
  std::vector<Complex> vertices;
  std::vector<std::pair<int, Complex>> coefficients;

  static CurveSpec circle(Complex center, double radius);
  static CurveSpec polygon(std::vector<Complex> vertices);

  BoundaryCurve build() const;
};

struct SlitMix {
  std::string label;
  SlitSpec slits;
};

struct ProbeSpec {
  std::string label;
  Complex start;
  Complex target;
  int count = 10;
  double min_distance = 1e-4;
  /// Probes sharing a non-empty group approach one target from different
  /// directions and are combined into a directional verdict.
  std::string group;

  ProbePath path() const;
};

struct DomainSpec {
  std::string id;
  std::string description;
  CurveSpec outer;
  std::vector<CurveSpec> inners;
  /// Straight slit [from, to]; excludes `inners`.
  std::optional<std::pair<Complex, Complex>> slit;
  int n = 1024;
  int grading_order = 3;
  std::vector<SlitMix> mixes;
  int grid_nx = 101;
  int grid_ny = 101;
  std::vector<ProbeSpec> probes;

  int ell() const { return slit ? 1 : static_cast<int>(inners.size()); }
  void validate() const;
  /// Region with `n_override` nodes per component when positive.
  Region region(int n_override = 0) const;
  const SlitMix& mix(const std::string& label) const;
};

nlohmann::json to_json(const DomainSpec& spec);
DomainSpec domain_from_json(const nlohmann::json& j);
DomainSpec load_domain(const std::string& path);

/// Shipped example domains in a fixed order.
const std::vector<DomainSpec>& builtin_demos();
const DomainSpec& builtin_demo(const std::string& id);

struct StudyOptions {
  bool critical = true;
  bool probes = true;
  int workers = 0;
  int n = 0;   // 0: the domain default
  int nx = 0;  // 0: the domain default
  int ny = 0;
  std::vector<std::string> mixes;  // empty: all
  ProbeOptions probe;
};

struct DirectionalVerdict {
  std::string group;
  Trend trend = Trend::finite;
};

struct MixStudy {
  SlitMix mix;
  ScalarField field;
  std::optional<CriticalReport> critical;
  std::optional<MorseReport> morse;
  BoundReport bound;
  std::vector<ProbeResult> probes;
  std::vector<DirectionalVerdict> directional;
  double seconds = 0.0;
};

/// Sweep, critical points, Morse relation, lower bound and probes for every
/// selected slit mix of a domain.
std::vector<MixStudy> run_study(const DomainSpec& spec, const StudyOptions& opts = {});

/// Combined verdicts of the probe groups.
std::vector<DirectionalVerdict> directional_verdicts(std::span<const ProbeSpec> specs,
                                                     std::span<const ProbeResult> results);

}  // namespace mityuk
