#include "tcsd/fit_drivers.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <memory>
#include <numeric>
#include <stdexcept>

namespace tcsd {
namespace {

constexpr double kPi = 3.1415926535897932385;

double weighted_mean_abs_gdiff(const HoleGFactors& holes, double g_e) {
  double acc = 0.0;
  const double total = holes.total_multiplicity();
  for (const auto& e : holes.entries)
    acc += e.multiplicity / total * std::abs(e.g_h - g_e);
  return acc;
}

// Field at which the sweep first drops below half its peak amplitude
// (linear interpolation); 0 when it never does.
double half_crossing_field(const SweepData& sweep) {
  const double peak = *std::max_element(sweep.amplitude.begin(),
                                        sweep.amplitude.end());
  const double half = 0.5 * peak;
  for (std::size_t i = 1; i < sweep.size(); ++i) {
    if (sweep.amplitude[i] < half && sweep.amplitude[i - 1] >= half) {
      const double a0 = sweep.amplitude[i - 1], a1 = sweep.amplitude[i];
      const double t = (half - a0) / (a1 - a0);
      return sweep.b_gauss[i - 1] + t * (sweep.b_gauss[i] - sweep.b_gauss[i - 1]);
    }
  }
  return 0.0;
}

std::vector<double> model_sweep_amplitudes(const HyperpolModel& model,
                                           const std::vector<double>& b,
                                           Exec exec) {
  std::vector<double> out(b.size());
  if (model.inhom) {
    const ConvolvedEvaluator eval(model);
    if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
      for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(b.size()); ++i)
        out[static_cast<std::size_t>(i)] =
            eval.value(b[static_cast<std::size_t>(i)], 0.0);
    } else {
      for (std::size_t i = 0; i < b.size(); ++i) out[i] = eval.value(b[i], 0.0);
    }
  } else {
    for (std::size_t i = 0; i < b.size(); ++i)
      out[i] = ensemble_amplitude(model, b[i], 0.0);
  }
  return out;
}

FitResult fit_gamma_sd_one(const SweepData& sweep, const HoleGFactors& holes,
                           double g_e, const GammaSdOptions& opt) {
  HyperpolModel base;
  base.g_e = g_e;
  base.holes = holes;
  base.branch_ratio_r = opt.branch_ratio_r;
  if (opt.inhom_fwhm_mhz)
    base.inhom = LineshapeSpec{opt.inhom_kind, *opt.inhom_fwhm_mhz};

  const double scale0 =
      *std::max_element(sweep.amplitude.begin(), sweep.amplitude.end());
  const double mean_gdiff = weighted_mean_abs_gdiff(holes, g_e);

  // initial width from the single-centre half-decay condition eps_B = Gamma
  const double b_half = half_crossing_field(sweep);
  double gamma0 = mean_gdiff * kMuBMhzPerGauss *
                  (b_half > 0.0 ? b_half : sweep.b_gauss.back());
  if (!(gamma0 > 0.0)) gamma0 = 1.0;

  const bool with_offset = opt.fit_offset;
  const Eigen::Index n_par = with_offset ? 3 : 2;
  Eigen::VectorXd p0(n_par), lo(n_par), hi(n_par);
  p0 << gamma0, scale0;
  lo << gamma0 * 1e-3, 0.0;
  hi << gamma0 * 1e3, 10.0 * std::max(scale0, 1e-12);
  if (with_offset) {
    p0[2] = 0.0;
    lo[2] = -std::abs(scale0);
    hi[2] = +std::abs(scale0);
  }

  const std::vector<double> sig =
      sweep.sigma.empty() ? std::vector<double>(sweep.size(), 1.0) : sweep.sigma;

  const auto residual = [&](const Eigen::VectorXd& p) {
    HyperpolModel m = base;
    m.gamma_mhz = p[0];
    const double scale = p[1];
    const double offset = with_offset ? p[2] : 0.0;
    const std::vector<double> a = model_sweep_amplitudes(m, sweep.b_gauss, opt.exec);
    Eigen::VectorXd r(static_cast<Eigen::Index>(sweep.size()));
    for (std::size_t i = 0; i < sweep.size(); ++i)
      r[static_cast<Eigen::Index>(i)] =
          (scale * a[i] + offset - sweep.amplitude[i]) / sig[i];
    return r;
  };

  FitResult fit = least_squares(residual, p0, lo, hi);
  fit.names = {"gamma_sd_mhz", "scale"};
  if (with_offset) fit.names.push_back("offset");
  return fit;
}

}  // namespace

WeightMode weight_mode_from_string(const std::string& s) {
  if (s == "equal") return WeightMode::equal;
  if (s == "single-min" || s == "single_min") return WeightMode::single_min;
  if (s == "single-max" || s == "single_max") return WeightMode::single_max;
  throw std::invalid_argument("unknown weight mode: " + s);
}

FitResult fit_gamma_sd(const SweepData& sweep, const HoleGFactors& holes,
                       double g_e, const GammaSdOptions& opt) {
  sweep.validate();
  holes.validate();

  const double first = sweep.amplitude.front();
  const double lowest =
      *std::min_element(sweep.amplitude.begin(), sweep.amplitude.end());
  if (lowest > 0.8 * first)
    std::cerr << "fit_gamma_sd: warning: sweep never drops below 0.8 of its "
                 "initial amplitude; width is poorly constrained\n";

  if (opt.weight_mode == WeightMode::equal)
    return fit_gamma_sd_one(sweep, holes, g_e, opt);

  // bounding sets: fit each subset alone, keep the extreme fitted width
  FitResult best;
  bool have = false;
  for (const auto& entry : holes.entries) {
    HoleGFactors one;
    one.entries = {{entry.g_h, entry.multiplicity, entry.sigma}};
    FitResult fit = fit_gamma_sd_one(sweep, one, g_e, opt);
    if (!fit.converged) continue;
    const double g = fit.value("gamma_sd_mhz");
    if (!have ||
        (opt.weight_mode == WeightMode::single_min ? g < best.value("gamma_sd_mhz")
                                                   : g > best.value("gamma_sd_mhz"))) {
      best = fit;
      have = true;
    }
  }
  if (!have)
    throw std::runtime_error("fit_gamma_sd: no single-subset fit converged");
  return best;
}

FitResult fit_linewidth_spectrum(const SpectrumData& spectrum,
                                 const SpectrumFitOptions& opt) {
  spectrum.validate();

  const auto& x = spectrum.delta_mhz;
  const auto& y = spectrum.counts;
  const std::size_t n = x.size();

  const std::size_t ipk = static_cast<std::size_t>(
      std::max_element(y.begin(), y.end()) - y.begin());
  const double ymin = *std::min_element(y.begin(), y.end());
  const double range = y[ipk] - ymin;
  if (!(range > 0.0))
    throw std::invalid_argument("fit_linewidth_spectrum: flat spectrum");

  // initial width from the half-max crossings around the peak
  const double half = ymin + 0.5 * range;
  double x_left = x.front(), x_right = x.back();
  for (std::size_t i = ipk; i-- > 0;) {
    if (y[i] <= half) {
      const double t = (half - y[i]) / (y[i + 1] - y[i]);
      x_left = x[i] + t * (x[i + 1] - x[i]);
      break;
    }
  }
  for (std::size_t i = ipk + 1; i < n; ++i) {
    if (y[i] <= half) {
      const double t = (half - y[i - 1]) / (y[i] - y[i - 1]);
      x_right = x[i - 1] + t * (x[i] - x[i - 1]);
      break;
    }
  }
  double width0 = x_right - x_left;
  if (!(width0 > 0.0)) width0 = 0.25 * (x.back() - x.front());

  const double span = x.back() - x.front();
  if (!(span > 2.0 * width0))
    throw std::invalid_argument(
        "fit_linewidth_spectrum: spectrum span must exceed twice the initial "
        "width guess");

  // subset-mean |eps_conserving| fixes the Zeeman part of the width
  HoleGFactors holes = opt.holes;
  if (holes.entries.empty()) holes.entries = {{opt.g_e, 12, 0.0}};
  double mean_eps = 0.0;
  {
    const double total = holes.total_multiplicity();
    for (const auto& e : holes.entries)
      mean_eps += e.multiplicity / total *
                  std::abs(transition_splitting(opt.g_e, e.g_h,
                                                opt.residual_b_gauss)
                               .conserving_mhz);
  }

  const auto spectral_model = [&](double lambda, double delta) {
    if (opt.shape == ProfileKind::lorentzian) {
      // subset-averaged closed-form lineshape with Gamma = Lambda
      HyperpolModel m;
      m.gamma_mhz = lambda;
      m.g_e = opt.g_e;
      m.holes = holes;
      return ensemble_amplitude(m, opt.residual_b_gauss, delta);
    }
    const double w = std::sqrt(lambda * lambda + mean_eps * mean_eps);
    return profile(LineshapeSpec{opt.shape, w}, delta);
  };

  Eigen::VectorXd p0(4), lo(4), hi(4);
  p0 << width0, x[ipk], range, ymin;
  lo << std::max(1e-6, 1e-2 * width0), x.front(), 0.0,
      ymin - 2.0 * range;
  hi << 4.0 * span, x.back(), 10.0 * range, ymin + 2.0 * range;

  const std::vector<double> sig =
      spectrum.sigma.empty() ? std::vector<double>(n, 1.0) : spectrum.sigma;

  const auto residual = [&](const Eigen::VectorXd& p) {
    const double lambda = p[0], centre = p[1], amp = p[2], offset = p[3];
    const double peak = spectral_model(lambda, 0.0);
    Eigen::VectorXd r(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
      const double m = amp * spectral_model(lambda, x[i] - centre) / peak + offset;
      r[static_cast<Eigen::Index>(i)] = (m - y[i]) / sig[i];
    }
    return r;
  };

  FitResult fit = least_squares(residual, p0, lo, hi);
  fit.names = {"lambda_mhz", "centre_mhz", "amplitude", "offset"};
  return fit;
}

namespace {

// chi^2 of the sorted-descending pairing at fixed parameters
double calibration_cost(const std::vector<double>& g_meas_sorted,
                        const std::vector<double>& sig_sorted,
                        const HoleModel& model, const OrientationSet& orient,
                        const Eigen::Vector3d& axis, double incl_deg,
                        double azim_deg, double b_gauss) {
  const FieldSpec f = FieldSpec::tilted(axis, incl_deg * kPi / 180.0,
                                        azim_deg * kPi / 180.0, b_gauss);
  std::vector<double> g = hole_g_per_orientation(model, orient, f);
  std::sort(g.rbegin(), g.rend());
  double cost = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double r = (g[i] - g_meas_sorted[i]) / sig_sorted[i];
    cost += r * r;
  }
  return cost;
}

}  // namespace

FitResult fit_gfactor_calibration(const std::vector<double>& g_measured,
                                  const std::vector<double>& g_sigma,
                                  const StrainConfig& strain,
                                  const Eigen::Vector3d& nominal_axis,
                                  double b_gauss) {
  if (g_measured.size() != 12)
    throw std::invalid_argument(
        "fit_gfactor_calibration: exactly 12 measured g-factors required, got " +
        std::to_string(g_measured.size()));
  std::vector<double> sigma = g_sigma;
  if (sigma.empty()) sigma.assign(12, 1.0);
  if (sigma.size() != 12)
    throw std::invalid_argument(
        "fit_gfactor_calibration: sigma list must also have 12 entries");
  for (double s : sigma)
    if (!(s > 0.0))
      throw std::invalid_argument("fit_gfactor_calibration: sigma must be > 0");

  const OrientationSet orient = enumerate_orientations(strain);

  // sort measured descending, carrying sigmas with their values
  std::vector<std::size_t> order(12);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return g_measured[a] > g_measured[b];
  });
  std::vector<double> g_sorted(12), sig_sorted(12);
  for (std::size_t i = 0; i < 12; ++i) {
    g_sorted[i] = g_measured[order[i]];
    sig_sorted[i] = sigma[order[i]];
  }

  const auto residual = [&, g_sorted, sig_sorted](const Eigen::VectorXd& p) {
    HoleModel model;
    model.strain = strain;
    model.g1 = p[0];
    model.g2 = p[1];
    const FieldSpec f = FieldSpec::tilted(nominal_axis, p[2] * kPi / 180.0,
                                          p[3] * kPi / 180.0, b_gauss);
    std::vector<double> g = hole_g_per_orientation(model, orient, f);
    std::sort(g.rbegin(), g.rend());
    Eigen::VectorXd r(12);
    for (Eigen::Index i = 0; i < 12; ++i)
      r[i] = (g[static_cast<std::size_t>(i)] -
              g_sorted[static_cast<std::size_t>(i)]) /
             sig_sorted[static_cast<std::size_t>(i)];
    return r;
  };

  // multistart over azimuth seeds; each start gets a wrap-free local window
  FitResult best;
  double best_cost = std::numeric_limits<double>::infinity();
  bool best_converged = false;
  for (int k = 0; k < 8; ++k) {
    const double azim_seed = 45.0 * k;
    Eigen::VectorXd p0(4), lo(4), hi(4);
    p0 << 1.4, -0.1, 5.0, azim_seed;
    lo << 1.0, -0.5, 0.0, azim_seed - 180.0;
    hi << 2.0, 0.1, 30.0, azim_seed + 180.0;
    FitResult fit = least_squares(residual, p0, lo, hi);
    const bool better = best.params.size() == 0 ||
                        (fit.converged && !best_converged) ||
                        (fit.converged == best_converged &&
                         fit.chi2_reduced < best_cost);
    if (better) {
      best = fit;
      best_cost = fit.chi2_reduced;
      best_converged = fit.converged;
    }
  }
  if (best.params.size() != 4)
    throw std::runtime_error("fit_gfactor_calibration: all multistarts failed");

  // canonicalize the azimuth: {phi, -phi, 180-phi, 180+phi} are exact
  // symmetry equivalents; keep the smallest angle in [0, 360)
  {
    HoleModel model;
    model.strain = strain;
    model.g1 = best.params[0];
    model.g2 = best.params[1];
    const double incl = best.params[2];
    double phi = std::fmod(best.params[3], 360.0);
    if (phi < 0) phi += 360.0;
    const double ref_cost = calibration_cost(g_sorted, sig_sorted, model, orient,
                                             nominal_axis, incl, phi, b_gauss);
    double candidates[4] = {phi, -phi, 180.0 - phi, 180.0 + phi};
    double chosen = phi;
    for (double c : candidates) {
      double cc = std::fmod(c, 360.0);
      if (cc < 0) cc += 360.0;
      const double cost = calibration_cost(g_sorted, sig_sorted, model, orient,
                                           nominal_axis, incl, cc, b_gauss);
      if (cost <= ref_cost * (1.0 + 1e-9) + 1e-12 && cc < chosen) chosen = cc;
    }
    if (chosen != best.params[3]) {
      // re-polish from the canonical angle so covariance matches the result
      Eigen::VectorXd p0(4), lo(4), hi(4);
      p0 << best.params[0], best.params[1], best.params[2], chosen;
      lo << 1.0, -0.5, 0.0, chosen - 180.0;
      hi << 2.0, 0.1, 30.0, chosen + 180.0;
      FitResult fit = least_squares(residual, p0, lo, hi);
      if (fit.converged) best = fit;
    }
  }

  best.names = {"g1", "g2", "incl_deg", "azim_deg"};
  return best;
}

OrientationMap orientation_bound_sweep(const SweepData& sweep,
                                       const HolesBuilder& builder, double g_e,
                                       const OrientationSweepOptions& opt) {
  sweep.validate();
  if (opt.n_theta < 1 || opt.n_phi < 1)
    throw std::invalid_argument("orientation_bound_sweep: grid must be >= 1x1");
  if (opt.n_theta < 8 || opt.n_phi < 8)
    std::cerr << "orientation_bound_sweep: warning: grid below 8x8 samples the "
                 "orientation space coarsely\n";

  OrientationMap map;
  map.theta_rad.resize(static_cast<std::size_t>(opt.n_theta));
  map.phi_rad.resize(static_cast<std::size_t>(opt.n_phi));
  for (int i = 0; i < opt.n_theta; ++i)
    map.theta_rad[static_cast<std::size_t>(i)] =
        opt.n_theta == 1 ? 0.0
                         : opt.theta_max_rad * i / (opt.n_theta - 1);
  for (int j = 0; j < opt.n_phi; ++j)
    map.phi_rad[static_cast<std::size_t>(j)] =
        opt.n_phi == 1 ? 0.0 : opt.phi_max_rad * j / (opt.n_phi - 1);

  const std::size_t nt = map.theta_rad.size(), np = map.phi_rad.size();
  map.gamma_sd_mhz.assign(nt, std::vector<double>(np, std::numeric_limits<double>::quiet_NaN()));
  map.converged.assign(nt, std::vector<bool>(np, false));

  GammaSdOptions cell_opt = opt.fit;
  cell_opt.exec = Exec::serial;  // the grid loop is the parallel level

  const auto run_cell = [&](std::size_t i, std::size_t j) {
    try {
      const HoleGFactors holes = builder(map.theta_rad[i], map.phi_rad[j]);
      const FitResult fit = fit_gamma_sd(sweep, holes, g_e, cell_opt);
      if (fit.converged && fit.chi2_reduced <= cell_opt.mask_chi2) {
        map.gamma_sd_mhz[i][j] = fit.value("gamma_sd_mhz");
        map.converged[i][j] = true;
      }
    } catch (const std::exception&) {
      // masked point
    }
  };

  const std::ptrdiff_t total = static_cast<std::ptrdiff_t>(nt * np);
  if (opt.exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t k = 0; k < total; ++k)
      run_cell(static_cast<std::size_t>(k) / np, static_cast<std::size_t>(k) % np);
  } else {
    for (std::ptrdiff_t k = 0; k < total; ++k)
      run_cell(static_cast<std::size_t>(k) / np, static_cast<std::size_t>(k) % np);
  }

  bool any = false;
  for (std::size_t i = 0; i < nt; ++i)
    for (std::size_t j = 0; j < np; ++j) {
      if (!map.converged[i][j]) continue;
      if (!any || map.gamma_sd_mhz[i][j] > map.max_point.gamma_sd_mhz) {
        map.max_point = {map.theta_rad[i], map.phi_rad[j], map.gamma_sd_mhz[i][j]};
        any = true;
      }
    }
  if (!any)
    throw std::runtime_error("orientation_bound_sweep: no orientation fits data");

  map.validate();
  return map;
}

}  // namespace tcsd
