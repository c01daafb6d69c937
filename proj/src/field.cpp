#include "tcsd/field.hpp"

#include <cmath>
#include <stdexcept>

#include "tcsd/constants.hpp"
#include "tcsd/spin_operators.hpp"

namespace tcsd {

void FieldSpec::validate() const {
  if (!(magnitude_gauss >= 0.0) || !std::isfinite(magnitude_gauss))
    throw std::invalid_argument("FieldSpec: magnitude must be >= 0 gauss");
  if (magnitude_gauss > 0.0 && std::abs(direction.norm() - 1.0) > 1e-12)
    throw std::invalid_argument("FieldSpec: direction must be a unit vector");
}

FieldSpec FieldSpec::along(const Eigen::Vector3d& axis, double magnitude_gauss) {
  const double n = axis.norm();
  if (n == 0.0)
    throw std::invalid_argument("FieldSpec: zero direction vector");
  FieldSpec f;
  f.magnitude_gauss = magnitude_gauss;
  f.direction = axis / n;
  f.validate();
  return f;
}

void axis_frame(const Eigen::Vector3d& n_unit, Eigen::Vector3d& e1,
                Eigen::Vector3d& e2) {
  Eigen::Vector3d ref(0, 0, 1);
  Eigen::Vector3d proj = ref - ref.dot(n_unit) * n_unit;
  if (proj.norm() < 1e-9) {
    ref = Eigen::Vector3d(1, 0, 0);
    proj = ref - ref.dot(n_unit) * n_unit;
  }
  e1 = proj.normalized();
  e2 = n_unit.cross(e1);
}

FieldSpec FieldSpec::tilted(const Eigen::Vector3d& nominal_axis, double incl_rad,
                            double azim_rad, double magnitude_gauss) {
  const double n = nominal_axis.norm();
  if (n == 0.0)
    throw std::invalid_argument("FieldSpec: zero nominal axis");
  const Eigen::Vector3d nhat = nominal_axis / n;
  Eigen::Vector3d e1, e2;
  axis_frame(nhat, e1, e2);
  FieldSpec f;
  f.magnitude_gauss = magnitude_gauss;
  f.direction = (std::cos(incl_rad) * nhat +
                 std::sin(incl_rad) *
                     (std::cos(azim_rad) * e1 + std::sin(azim_rad) * e2))
                    .normalized();
  f.validate();
  return f;
}

Eigen::Matrix4cd build_zeeman_hamiltonian(const FieldSpec& field, double g1,
                                          double g2) {
  field.validate();
  const auto& ops = SpinOperators::instance();
  const Eigen::Matrix4cd js[3] = {ops.jx, ops.jy, ops.jz};
  const Eigen::Vector3d b = field.vector_gauss();

  Eigen::Matrix4cd h = Eigen::Matrix4cd::Zero();
  for (int i = 0; i < 3; ++i) {
    const Eigen::Matrix4cd j3 = js[i] * js[i] * js[i];
    h += b[i] * (g1 * js[i] + g2 * j3);
  }
  return kMuBMhzPerGauss * h;
}

}  // namespace tcsd
