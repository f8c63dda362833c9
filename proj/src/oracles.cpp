#include "mityuk/oracles.hpp"

#include <cmath>

#include "mityuk/error.hpp"

namespace mityuk::oracles {

namespace {

void check_args(double q, double r, const ProductConfig& cfg) {
  if (!(q > 0.0 && q < 1.0)) throw Error("invalid-argument", "q must lie in (0, 1)");
  if (!(r > q && r < 1.0)) throw Error("invalid-argument", "r must lie in (q, 1)");
  if (!(cfg.tol > 0.0) || cfg.max_terms < 1) throw Error("invalid-config", "bad product config");
}

// log of (1 - r^2) * prod_j F_j^{s_j}, F_j = (1 - q^2j r^2)(1 - q^2j / r^2) / (1 - q^2j)^2,
// with s_j = 1 or (-1)^j.
double log_product(double q, double r, const ProductConfig& cfg, bool alternating) {
  double sum = std::log1p(-r * r);
  const double q2 = q * q;
  double qj = 1.0;
  for (int j = 1; j <= cfg.max_terms; ++j) {
    qj *= q2;
    const double log_factor =
        std::log1p(-qj * r * r) + std::log1p(-qj / (r * r)) - 2.0 * std::log1p(-qj);
    const double sign = (alternating && j % 2 == 1) ? -1.0 : 1.0;
    sum += sign * log_factor;
    if (std::abs(std::expm1(log_factor)) < cfg.tol) break;
  }
  return sum;
}

}  // namespace

double annulus_R_circular(double q, double r, const ProductConfig& cfg) {
  check_args(q, r, cfg);
  return std::exp(log_product(q, r, cfg, false));
}

double annulus_R_radial(double q, double r, const ProductConfig& cfg) {
  check_args(q, r, cfg);
  return std::exp(log_product(q, r, cfg, true));
}

double disk_R(Complex alpha) {
  const double a2 = std::norm(alpha);
  if (!(a2 < 1.0)) throw Error("invalid-argument", "alpha must lie in the unit disk");
  return 1.0 - a2;
}

}  // namespace mityuk::oracles
