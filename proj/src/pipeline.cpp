#include "tcsd/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>

#include "tcsd/least_squares.hpp"
#include "tcsd/rng.hpp"

namespace tcsd {

SweepData simulate_sweep(const HyperpolModel& model,
                         const std::vector<double>& b_gauss,
                         double noise_sigma, std::uint64_t seed, Exec exec) {
  model.validate();
  if (!(noise_sigma >= 0.0))
    throw std::invalid_argument("simulate_sweep: noise_sigma must be >= 0");
  if (b_gauss.empty())
    throw std::invalid_argument("simulate_sweep: empty field grid");

  SweepData out;
  out.b_gauss = b_gauss;
  std::sort(out.b_gauss.begin(), out.b_gauss.end());
  const std::size_t n = out.b_gauss.size();
  out.amplitude.resize(n);
  out.sigma.assign(n, noise_sigma > 0.0 ? noise_sigma : 1.0);

  const std::unique_ptr<ConvolvedEvaluator> conv =
      model.inhom ? std::make_unique<ConvolvedEvaluator>(model) : nullptr;

  const auto eval_point = [&](std::size_t i) {
    const double b = out.b_gauss[i];
    double a = conv ? conv->value(b, 0.0) : ensemble_amplitude(model, b, 0.0);
    if (noise_sigma > 0.0)
      a += noise_sigma * normal01(seed, static_cast<std::uint64_t>(i));
    out.amplitude[i] = a;
  };

  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i)
      eval_point(static_cast<std::size_t>(i));
  } else {
    for (std::size_t i = 0; i < n; ++i) eval_point(i);
  }
  return out;
}

PLEMap simulate_map(const HyperpolModel& model,
                    const std::vector<double>& b_gauss,
                    const std::vector<double>& delta_mhz, Exec exec) {
  model.validate();
  if (b_gauss.empty() || delta_mhz.empty())
    throw std::invalid_argument("simulate_map: empty grid");

  PLEMap map;
  map.b_gauss = b_gauss;
  map.delta_mhz = delta_mhz;
  std::sort(map.b_gauss.begin(), map.b_gauss.end());
  std::sort(map.delta_mhz.begin(), map.delta_mhz.end());
  const std::size_t nb = map.b_gauss.size(), nd = map.delta_mhz.size();
  map.amplitude.assign(nb, std::vector<double>(nd, 0.0));

  const std::ptrdiff_t total = static_cast<std::ptrdiff_t>(nb * nd);
  const auto eval_cell = [&](std::ptrdiff_t k) {
    const std::size_t i = static_cast<std::size_t>(k) / nd;
    const std::size_t j = static_cast<std::size_t>(k) % nd;
    map.amplitude[i][j] =
        ensemble_amplitude(model, map.b_gauss[i], map.delta_mhz[j]);
  };

  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t k = 0; k < total; ++k) eval_cell(k);
  } else {
    for (std::ptrdiff_t k = 0; k < total; ++k) eval_cell(k);
  }

  map.validate();
  return map;
}

std::vector<LinewidthRow> map_linewidths(const PLEMap& map, Exec exec) {
  map.validate();
  if (map.delta_mhz.size() < 5)
    throw std::invalid_argument("map_linewidths: rows need at least 5 points");

  const std::size_t nb = map.b_gauss.size();
  std::vector<LinewidthRow> rows(nb);
  std::vector<char> ok(nb, 0);

  const auto fit_row = [&](std::size_t i) {
    const auto& x = map.delta_mhz;
    const auto& y = map.amplitude[i];
    const double peak = *std::max_element(y.begin(), y.end());
    const double floor = *std::min_element(y.begin(), y.end());
    if (!(peak > floor)) return;

    // peak-normalized Lorentzian: p = (fwhm, centre, height, offset)
    const auto residual = [&](const Eigen::VectorXd& p) {
      Eigen::VectorXd r(static_cast<Eigen::Index>(x.size()));
      for (std::size_t j = 0; j < x.size(); ++j) {
        const double u = 2.0 * (x[j] - p[1]) / p[0];
        const double m = p[2] / (1.0 + u * u) + p[3];
        r[static_cast<Eigen::Index>(j)] = m - y[j];
      }
      return r;
    };

    const double span = x.back() - x.front();
    Eigen::VectorXd p0(4), lo(4), hi(4);
    p0 << 0.25 * span, x[static_cast<std::size_t>(
                           std::max_element(y.begin(), y.end()) - y.begin())],
        peak - floor, floor;
    lo << span * 1e-4, x.front(), 0.0, floor - (peak - floor);
    hi << span * 10.0, x.back(), 2.0 * (peak - floor), peak;

    FitResult fit = least_squares(residual, p0, lo, hi);
    if (!fit.converged) return;
    rows[i].b_gauss = map.b_gauss[i];
    rows[i].fwhm_mhz = fit.params[0];
    rows[i].sigma_mhz = fit.sigmas[0];
    ok[i] = 1;
  };

  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(nb); ++i)
      fit_row(static_cast<std::size_t>(i));
  } else {
    for (std::size_t i = 0; i < nb; ++i) fit_row(i);
  }

  std::vector<LinewidthRow> out;
  out.reserve(nb);
  for (std::size_t i = 0; i < nb; ++i)
    if (ok[i]) out.push_back(rows[i]);
  return out;
}

Indistinguishability indistinguishability(double gamma_sd_mhz, double xi,
                                          double gamma1_mhz) {
  if (!(gamma_sd_mhz >= 0.0))
    throw std::invalid_argument("indistinguishability: gamma_sd must be >= 0");
  if (!(xi > 0.0) || !(gamma1_mhz > 0.0))
    throw std::invalid_argument("indistinguishability: xi and gamma1 must be > 0");
  Indistinguishability out;
  out.xi = xi;
  out.gamma1_mhz = gamma1_mhz;
  out.gamma_sd_mhz = gamma_sd_mhz;
  out.value = xi * gamma1_mhz / (xi * gamma1_mhz + gamma_sd_mhz);
  return out;
}

}  // namespace tcsd
