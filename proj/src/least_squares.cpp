#include "tcsd/least_squares.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace tcsd {

double FitResult::value(const std::string& name) const {
  for (std::size_t i = 0; i < names.size(); ++i)
    if (names[i] == name) return params[static_cast<Eigen::Index>(i)];
  throw std::invalid_argument("FitResult: unknown parameter " + name);
}

double FitResult::sigma(const std::string& name) const {
  for (std::size_t i = 0; i < names.size(); ++i)
    if (names[i] == name) return sigmas[static_cast<Eigen::Index>(i)];
  throw std::invalid_argument("FitResult: unknown parameter " + name);
}

namespace {

Eigen::VectorXd clamp(const Eigen::VectorXd& p, const Eigen::VectorXd& lo,
                      const Eigen::VectorXd& hi) {
  return p.cwiseMax(lo).cwiseMin(hi);
}

// Central finite differences with steps kept inside the bounds; falls back to
// one-sided at an active bound.
Eigen::MatrixXd fd_jacobian(const ResidualFn& residual, const Eigen::VectorXd& p,
                            const Eigen::VectorXd& lo, const Eigen::VectorXd& hi,
                            double rel_step, Eigen::Index m) {
  const Eigen::Index n = p.size();
  Eigen::MatrixXd jac(m, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const double h = rel_step * std::max(std::abs(p[j]), 1.0);
    Eigen::VectorXd pp = p, pm = p;
    pp[j] = std::min(p[j] + h, hi[j]);
    pm[j] = std::max(p[j] - h, lo[j]);
    const double span = pp[j] - pm[j];
    if (span <= 0.0) {
      jac.col(j).setZero();
      continue;
    }
    jac.col(j) = (residual(pp) - residual(pm)) / span;
  }
  return jac;
}

}  // namespace

FitResult least_squares(const ResidualFn& residual, const Eigen::VectorXd& p0,
                        const Eigen::VectorXd& lo, const Eigen::VectorXd& hi,
                        const LsqOptions& opt) {
  const Eigen::Index n = p0.size();
  if (lo.size() != n || hi.size() != n)
    throw std::invalid_argument("least_squares: bounds size mismatch");
  for (Eigen::Index j = 0; j < n; ++j) {
    if (!(lo[j] <= hi[j]))
      throw std::invalid_argument("least_squares: lo > hi");
    if (p0[j] < lo[j] || p0[j] > hi[j])
      throw std::invalid_argument("least_squares: p0 outside bounds");
  }

  Eigen::VectorXd p = p0;
  Eigen::VectorXd r = residual(p);
  if (!r.allFinite())
    throw std::invalid_argument("least_squares: residual not finite at p0");
  const Eigen::Index m = r.size();
  double cost = r.squaredNorm();
  if (opt.cost_trace) opt.cost_trace->push_back(cost);

  FitResult out;
  out.params = p;
  out.converged = false;

  double lambda = opt.lambda0;
  int iter = 0;
  bool singular = false;
  for (; iter < opt.max_iter; ++iter) {
    const Eigen::MatrixXd jac =
        fd_jacobian(residual, p, lo, hi, opt.fd_rel_step, m);
    const Eigen::MatrixXd jtj = jac.transpose() * jac;
    const Eigen::VectorXd g = jac.transpose() * r;

    if (g.lpNorm<Eigen::Infinity>() < 1e-14 * std::max(1.0, std::sqrt(cost))) {
      out.converged = true;  // stationary point
      break;
    }

    // damping floor keeps the system solvable when a column vanishes
    Eigen::VectorXd diag = jtj.diagonal();
    const double dmax = diag.maxCoeff();
    if (dmax <= 0.0) {
      singular = true;
      break;
    }
    diag = diag.cwiseMax(1e-12 * dmax);

    bool accepted = false;
    for (int tries = 0; tries < 40; ++tries) {
      Eigen::MatrixXd a = jtj;
      a.diagonal() += lambda * diag;
      const Eigen::LDLT<Eigen::MatrixXd> ldlt(a);
      if (ldlt.info() != Eigen::Success) {
        lambda *= 4.0;
        continue;
      }
      const Eigen::VectorXd step = ldlt.solve(-g);
      const Eigen::VectorXd p_try = clamp(p + step, lo, hi);
      const Eigen::VectorXd r_try = residual(p_try);
      const double cost_try =
          r_try.allFinite() ? r_try.squaredNorm()
                            : std::numeric_limits<double>::infinity();
      if (cost_try <= cost) {
        const double drop = cost - cost_try;
        const double step_norm = (p_try - p).norm();
        p = p_try;
        r = r_try;
        cost = cost_try;
        if (opt.cost_trace) opt.cost_trace->push_back(cost);
        lambda = std::max(lambda / 3.0, 1e-12);
        accepted = true;
        if (drop <= opt.cost_rel_tol * std::max(cost, 1e-300) ||
            step_norm <= opt.step_tol)
          out.converged = true;
        break;
      }
      lambda *= 4.0;
      if (lambda > 1e14) break;
    }
    if (!accepted) {
      // no downhill step found at any damping: treat as converged-in-place
      out.converged = true;
      break;
    }
    if (out.converged) break;
  }
  out.n_iter = iter + 1;

  // covariance from the Jacobian at the solution
  const Eigen::MatrixXd jac = fd_jacobian(residual, p, lo, hi, opt.fd_rel_step, m);
  const Eigen::MatrixXd jtj = jac.transpose() * jac;
  const double dof = static_cast<double>(std::max<Eigen::Index>(m - n, 1));
  out.chi2_reduced = cost / dof;

  const Eigen::FullPivLU<Eigen::MatrixXd> lu(jtj);
  if (singular || !lu.isInvertible()) {
    out.converged = false;
    out.message = "singular normal matrix";
    out.covariance = Eigen::MatrixXd::Constant(
        n, n, std::numeric_limits<double>::quiet_NaN());
  } else {
    out.covariance = out.chi2_reduced * lu.inverse();
    // enforce exact symmetry lost to roundoff
    out.covariance = 0.5 * (out.covariance + out.covariance.transpose()).eval();
  }

  out.params = p;
  out.sigmas = out.covariance.diagonal().cwiseMax(0.0).cwiseSqrt();

  for (Eigen::Index j = 0; j < n; ++j) {
    const double span = hi[j] - lo[j];
    if (span > 0.0 && (p[j] - lo[j] <= 1e-12 * span || hi[j] - p[j] <= 1e-12 * span))
      out.at_bounds = true;
  }
  return out;
}

}  // namespace tcsd
