#pragma once

#include <Eigen/Dense>

namespace tcsd {

// Magnetic field in crystal coordinates: magnitude in gauss plus a unit
// direction. Constructed either directly from a vector or from (inclination,
// azimuth) angles about a nominal crystal axis.
struct FieldSpec {
  double magnitude_gauss = 0.0;
  Eigen::Vector3d direction = Eigen::Vector3d::UnitZ();

  // Normalizes `axis`; throws on zero vector or negative magnitude.
  static FieldSpec along(const Eigen::Vector3d& axis, double magnitude_gauss);

  // Direction = cos(incl)*n + sin(incl)*(cos(azim)*e1 + sin(azim)*e2) where
  // (e1, e2) = axis_frame(n). Angles in radians.
  static FieldSpec tilted(const Eigen::Vector3d& nominal_axis, double incl_rad,
                          double azim_rad, double magnitude_gauss);

  Eigen::Vector3d vector_gauss() const { return magnitude_gauss * direction; }

  void validate() const;  // throws std::invalid_argument
};

// Right-handed transverse frame for azimuth angles about n: e1 is the
// projection of [001] perpendicular to n (of [100] when n is parallel to
// [001]), e2 = n x e1. Fixes the azimuth zero consistently for all axes.
void axis_frame(const Eigen::Vector3d& n_unit, Eigen::Vector3d& e1,
                Eigen::Vector3d& e2);

// H_b in MHz: mu_B (g1 sum_i B_i J_i + g2 sum_i B_i J_i^3), B in gauss.
Eigen::Matrix4cd build_zeeman_hamiltonian(const FieldSpec& field, double g1,
                                          double g2);

}  // namespace tcsd
