#include "tcsd/spin_operators.hpp"

#include <cmath>

namespace tcsd {
namespace {

SpinOperators build() {
  using std::sqrt;
  SpinOperators ops;
  ops.jx.setZero();
  ops.jy.setZero();
  ops.jz.setZero();
  ops.id.setIdentity();

  // basis {+3/2, +1/2, -1/2, -3/2}; ladder elements
  // <m±1|J±|m> = sqrt(j(j+1) - m(m±1))
  const double j = 1.5;
  const double m[4] = {1.5, 0.5, -0.5, -1.5};
  for (int col = 0; col < 4; ++col) ops.jz(col, col) = m[col];

  Eigen::Matrix4cd jplus = Eigen::Matrix4cd::Zero();
  for (int col = 1; col < 4; ++col) {
    double c = sqrt(j * (j + 1) - m[col] * (m[col] + 1));
    jplus(col - 1, col) = c;  // raises m[col] -> m[col-1]
  }
  Eigen::Matrix4cd jminus = jplus.adjoint();

  ops.jx = 0.5 * (jplus + jminus);
  ops.jy = std::complex<double>(0, -0.5) * (jplus - jminus);
  return ops;
}

}  // namespace

const SpinOperators& SpinOperators::instance() {
  static const SpinOperators ops = build();
  return ops;
}

}  // namespace tcsd
