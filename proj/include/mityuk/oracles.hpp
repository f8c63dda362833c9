#pragma once

#include "mityuk/geometry.hpp"

namespace mityuk::oracles {

struct ProductConfig {
  double tol = 1e-14;
  int max_terms = 200;
};

/// Conformal radius of the annulus q < |z| < 1 at a point of modulus r, for
/// the map onto the disk with a circular slit.
double annulus_R_circular(double q, double r, const ProductConfig& cfg = {});

/// Same, for the map onto the disk with a radial slit.
double annulus_R_radial(double q, double r, const ProductConfig& cfg = {});

/// Conformal radius of the unit disk, 1 - |alpha|^2.
double disk_R(Complex alpha);

}  // namespace mityuk::oracles
