#pragma once

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <vector>

namespace tcsd {

struct FitResult {
  std::vector<std::string> names;
  Eigen::VectorXd params;
  Eigen::VectorXd sigmas;
  Eigen::MatrixXd covariance;
  double chi2_reduced = 0.0;
  bool converged = false;
  int n_iter = 0;
  bool at_bounds = false;
  std::string message;

  double value(const std::string& name) const;
  double sigma(const std::string& name) const;
};

struct LsqOptions {
  int max_iter = 500;
  double fd_rel_step = 1e-6;
  double cost_rel_tol = 1e-10;
  double step_tol = 1e-12;
  double lambda0 = 1e-3;
  std::vector<double>* cost_trace = nullptr;  // accepted costs, for tests
};

// Residual function: params -> weighted residual vector (model - data)/sigma.
using ResidualFn = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

// Damped least squares (Levenberg-Marquardt): Gauss-Newton steps with
// adaptive damping, central finite-difference Jacobian, parameters clamped to
// [lo, hi]. Covariance = chi2_reduced * (J^T J)^-1 at the solution.
FitResult least_squares(const ResidualFn& residual, const Eigen::VectorXd& p0,
                        const Eigen::VectorXd& lo, const Eigen::VectorXd& hi,
                        const LsqOptions& opt = {});

}  // namespace tcsd
