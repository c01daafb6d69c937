#pragma once

#include <Eigen/Dense>

namespace tcsd {

// Angular momentum operators for j = 3/2 in the m_z basis
// {+3/2, +1/2, -1/2, -3/2} (descending m), plus the 4x4 identity.
struct SpinOperators {
  Eigen::Matrix4cd jx, jy, jz, id;

  static const SpinOperators& instance();
};

}  // namespace tcsd
