#pragma once

#include <array>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mityuk/mityuk.hpp"

namespace mityuk {

enum class Mask { interior, exterior, boundary_guard, failed };

std::string to_string(Mask m);

struct GridSpec {
  int nx = 101;
  int ny = 101;
  double xmin = -1.0, xmax = 1.0, ymin = -1.0, ymax = 1.0;

  /// Lattice over the bounding box of the region.
  static GridSpec covering(const Region& region, int nx = 101, int ny = 101);

  Complex point(int i, int j) const;
  double dx() const { return (xmax - xmin) / (nx - 1); }
  double dy() const { return (ymax - ymin) / (ny - 1); }
  void validate() const;
};

/// Values of R on a grid; entries are NaN wherever the mask is not interior.
/// Storage is row-major in j (imaginary direction): index = j * nx + i.
struct ScalarField {
  GridSpec grid;
  std::vector<double> values;
  std::vector<Mask> mask;
  std::string domain_id;
  SlitSpec slits;
  int n = 0;
  double mask_factor = 0.0;

  std::size_t index(int i, int j) const { return static_cast<std::size_t>(j) * grid.nx + i; }
  bool valid(int i, int j) const {
    return i >= 0 && j >= 0 && i < grid.nx && j < grid.ny && mask[index(i, j)] == Mask::interior;
  }
  double at(int i, int j) const { return values[index(i, j)]; }
};

/// Default distance (in local node spacings) below which sweep points are
/// masked as boundary_guard.
inline constexpr double kMaskFactor = 4.0;

struct SweepOptions {
  int workers = 0;  // 0: hardware concurrency
  double mask_factor = kMaskFactor;
  std::string domain_id;
};

/// R over the grid. Each grid row is one task; results do not depend on the
/// number of workers.
ScalarField sweep(const RadiusEvaluator& evaluator, const GridSpec& grid,
                  const SweepOptions& opts = {});

/// Same, with one full solve per point (any solver method). Much slower.
ScalarField sweep_direct(const Region& region, const SlitSpec& slits, const GridSpec& grid,
                         const SolverConfig& cfg, const SweepOptions& opts = {});

/// R at a batch of points; NaN marks points that cannot be evaluated.
using RadiusFunction = std::function<std::vector<double>(std::span<const Complex>)>;

RadiusFunction radius_function(const RadiusEvaluator& evaluator,
                               double mask_factor = kMaskFactor);

enum class CriticalKind { maximum, saddle, minimum, degenerate };

std::string to_string(CriticalKind k);

struct CriticalPoint {
  Complex location;
  CriticalKind kind = CriticalKind::degenerate;
  std::array<double, 2> hessian_eigs{0.0, 0.0};
  double gradient_norm = 0.0;
  double value = 0.0;
  int iterations = 0;
};

enum class Refine { none, local };

struct CriticalOptions {
  Refine refine = Refine::local;
  /// Critical when |grad R| <= gradient_tol * (max R - min R).
  double gradient_tol = 1e-6;
  /// Degenerate when an eigenvalue is below degenerate_tol * (max R - min R) / h^2
  /// or below degenerate_ratio times the other eigenvalue in modulus.
  double degenerate_tol = 1e-8;
  double degenerate_ratio = 1e-4;
  int max_iter = 40;
};

struct CriticalReport {
  std::vector<CriticalPoint> points;      // isolated critical points
  std::vector<CriticalPoint> degenerate;  // members of a non-isolated set
  std::vector<std::string> warnings;
  int n_max = 0;
  int n_saddle = 0;
  int n_min = 0;
  bool non_isolated = false;
  int candidates = 0;
};

CriticalReport find_critical_points(const ScalarField& field, const RadiusFunction* f,
                                    const CriticalOptions& opts = {});

struct MorseReport {
  int n_max = 0;
  int n_saddle = 0;
  int difference = 0;
  int expected = 0;
  bool pass = false;
  std::vector<std::string> notes;
};

MorseReport morse_check(const CriticalReport& report, int ell);

enum class Trend { to_zero, to_infinity, finite, divergent_directional };

std::string to_string(Trend t);

struct ProbePath {
  std::string label;
  Complex target;
  std::vector<Complex> points;
};

/// `count` points from `start` towards `target`, with distances to the
/// target decreasing geometrically from |start - target| to `min_distance`.
ProbePath make_probe_path(Complex start, Complex target, int count, double min_distance,
                          std::string label = {});

struct ProbeSample {
  Complex alpha;
  double distance = 0.0;
  double R = 0.0;
  int n = 0;
  double change = 0.0;  // relative change of R at the last doubling of n
};

struct ProbeOptions {
  int n_start = 256;
  int n_max = 4096;
  /// Accept R once doubling n changes it by less than this (relative).
  double accept_tol = 1e-6;
  /// Probes reach n = 4096, where GMRES is several times faster than LU.
  SolverConfig cfg{SolverMethod::iterative};
  /// Scale for the to_zero / to_infinity tests; NaN means R at the first point.
  double reference = std::numeric_limits<double>::quiet_NaN();
  double slope_threshold = 0.5;
  double zero_ratio = 1e-2;
  double infinity_ratio = 1e2;
  int fit_points = 4;
};

struct ProbeResult {
  std::string label;
  std::vector<ProbeSample> samples;
  Trend trend = Trend::finite;
  double slope = 0.0;
  double reference = 0.0;
  bool truncated = false;
  std::string note;
};

ProbeResult boundary_probe(const Region& region, const SlitSpec& slits, const ProbePath& path,
                           const ProbeOptions& opts = {});

/// Trend of a sample sequence; `samples` must be ordered by decreasing distance.
Trend classify_trend(std::span<const ProbeSample> samples, double reference,
                     const ProbeOptions& opts, double* slope = nullptr);

/// Two paths to one target: divergent_directional when both are finite and
/// their last values differ by more than `tol` (relative), else the common trend.
Trend combine_directional(const ProbeResult& a, const ProbeResult& b, double tol = 0.1);

struct BoundViolation {
  Complex alpha;
  double R = 0.0;
  double distance = 0.0;
};

struct BoundReport {
  std::size_t checked = 0;
  double min_margin = std::numeric_limits<double>::infinity();
  Complex min_margin_at;
  std::vector<BoundViolation> violations;
};

/// Compares R with the distance to the boundary at every interior grid point.
BoundReport lower_bound_check(const ScalarField& field, const Region& region);

}  // namespace mityuk
