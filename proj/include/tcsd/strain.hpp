#pragma once

#include <Eigen/Dense>
#include <vector>

#include "tcsd/constants.hpp"

namespace tcsd {

// Internal strain of the defect and the deformation potentials coupling it to
// the spin-3/2 hole. Strains are dimensionless, potentials in eV, tilt of the
// defect z axis away from [001] (within the (110) plane) in degrees.
struct StrainConfig {
  double eps_yy = kEpsYYDefault;
  double eps_zz = kEpsZZDefault;
  double b_deform_ev = kBDeformEvDefault;
  double d_deform_ev = kDDeformEvDefault;
  double tilt_deg = kTiltDegDefault;

  void validate() const;  // throws std::invalid_argument
};

// One crystallographic placement of the defect: the proper rotation taking
// defect coordinates to crystal coordinates and the strain tensor expressed in
// the crystal frame.
struct Orientation {
  Eigen::Matrix3d rotation;
  Eigen::Matrix3d strain_crystal;
  int label = 0;
  double weight = 1.0 / 12.0;
};

using OrientationSet = std::vector<Orientation>;

// Defect frame axes as columns (x, y, z) in crystal coordinates:
// y along [110], z = [001] tilted by tilt_deg toward the defect x axis.
Eigen::Matrix3d defect_frame(double tilt_deg);

// Strain tensor diag(0, eps_yy, eps_zz) rotated into the crystal frame.
Eigen::Matrix3d strain_in_crystal_frame(const StrainConfig& cfg);

// The 24 proper rotations of the cubic point group (signed permutation
// matrices with determinant +1), in a fixed deterministic order.
const std::vector<Eigen::Matrix3d>& cubic_rotations();

// Applies all 24 rotations to the defect strain tensor and deduplicates
// (elementwise tolerance 1e-9). Exactly 12 distinct orientations must remain;
// any other count throws a consistency error naming the count.
OrientationSet enumerate_orientations(const StrainConfig& cfg);

// H_s in MHz: -b * sum_i (J_i^2 - I) eps_ii - (d/sqrt(3)) * sum_{i!=j}
// (J_i J_j + J_j J_i)/2 * eps_ij, with b, d in eV converted internally.
// Throws if the strain tensor is not symmetric.
Eigen::Matrix4cd build_strain_hamiltonian(const Eigen::Matrix3d& strain_crystal,
                                          double b_ev, double d_ev);

}  // namespace tcsd
