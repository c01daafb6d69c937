#include "tcsd/strain.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "tcsd/spin_operators.hpp"

namespace tcsd {

void StrainConfig::validate() const {
  if (!(tilt_deg >= 0.0 && tilt_deg < 90.0))
    throw std::invalid_argument("StrainConfig: tilt_deg must lie in [0, 90)");
  if (!std::isfinite(eps_yy) || !std::isfinite(eps_zz) ||
      !std::isfinite(b_deform_ev) || !std::isfinite(d_deform_ev))
    throw std::invalid_argument("StrainConfig: non-finite parameter");
}

Eigen::Matrix3d defect_frame(double tilt_deg) {
  const double t = tilt_deg * M_PI / 180.0;
  const Eigen::Vector3d yhat = Eigen::Vector3d(1, 1, 0).normalized();
  const Eigen::Vector3d z0(0, 0, 1);
  const Eigen::Vector3d x0 = Eigen::Vector3d(1, -1, 0).normalized();
  // z tilted from [001] toward the defect x axis, staying in the (110) plane
  const Eigen::Vector3d zhat = std::cos(t) * z0 + std::sin(t) * x0;
  const Eigen::Vector3d xhat = yhat.cross(zhat);
  Eigen::Matrix3d frame;
  frame.col(0) = xhat;
  frame.col(1) = yhat;
  frame.col(2) = zhat;
  return frame;
}

Eigen::Matrix3d strain_in_crystal_frame(const StrainConfig& cfg) {
  cfg.validate();
  const Eigen::Matrix3d r = defect_frame(cfg.tilt_deg);
  Eigen::Matrix3d eps_defect = Eigen::Matrix3d::Zero();
  eps_defect(1, 1) = cfg.eps_yy;
  eps_defect(2, 2) = cfg.eps_zz;
  return r * eps_defect * r.transpose();
}

const std::vector<Eigen::Matrix3d>& cubic_rotations() {
  static const std::vector<Eigen::Matrix3d> rotations = [] {
    std::vector<Eigen::Matrix3d> out;
    const int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                             {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
    for (const auto& p : perms) {
      for (int signs = 0; signs < 8; ++signs) {
        Eigen::Matrix3d q = Eigen::Matrix3d::Zero();
        for (int i = 0; i < 3; ++i)
          q(i, p[i]) = (signs >> i) & 1 ? -1.0 : 1.0;
        if (q.determinant() > 0.5) out.push_back(q);
      }
    }
    return out;
  }();
  return rotations;
}

OrientationSet enumerate_orientations(const StrainConfig& cfg) {
  const Eigen::Matrix3d eps0 = strain_in_crystal_frame(cfg);
  const Eigen::Matrix3d frame0 = defect_frame(cfg.tilt_deg);
  const auto& rotations = cubic_rotations();

  OrientationSet out;
  for (const auto& q : rotations) {
    const Eigen::Matrix3d eps = q * eps0 * q.transpose();
    bool seen = false;
    for (const auto& o : out) {
      if ((o.strain_crystal - eps).cwiseAbs().maxCoeff() < 1e-9) {
        seen = true;
        break;
      }
    }
    if (seen) continue;
    Orientation o;
    o.rotation = q * frame0;
    o.strain_crystal = eps;
    o.label = static_cast<int>(out.size()) + 1;
    o.weight = 1.0 / 12.0;
    out.push_back(o);
  }

  if (out.size() != 12)
    throw std::runtime_error(
        "enumerate_orientations: expected 12 distinct orientations, found " +
        std::to_string(out.size()));
  return out;
}

Eigen::Matrix4cd build_strain_hamiltonian(const Eigen::Matrix3d& strain_crystal,
                                          double b_ev, double d_ev) {
  if ((strain_crystal - strain_crystal.transpose()).cwiseAbs().maxCoeff() >
      1e-12 * (1.0 + strain_crystal.cwiseAbs().maxCoeff()))
    throw std::invalid_argument(
        "build_strain_hamiltonian: strain tensor must be symmetric");

  const auto& ops = SpinOperators::instance();
  const Eigen::Matrix4cd js[3] = {ops.jx, ops.jy, ops.jz};

  Eigen::Matrix4cd h = Eigen::Matrix4cd::Zero();
  for (int i = 0; i < 3; ++i)
    h -= b_ev * strain_crystal(i, i) * (js[i] * js[i] - ops.id);
  const double dfac = d_ev / std::sqrt(3.0);
  for (int i = 0; i < 3; ++i)
    for (int jx = 0; jx < 3; ++jx) {
      if (i == jx) continue;
      h -= dfac * strain_crystal(i, jx) * 0.5 * (js[i] * js[jx] + js[jx] * js[i]);
    }
  return h * kEvToMhz;
}

}  // namespace tcsd
