#include "tcsd/cli.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "tcsd/csv_io.hpp"
#include "tcsd/fit_drivers.hpp"
#include "tcsd/pipeline.hpp"
#include "tcsd/run_config.hpp"

namespace tcsd {
namespace {

using nlohmann::json;

constexpr double kPi = 3.1415926535897932385;

Eigen::Vector3d parse_triple(const std::string& s) {
  Eigen::Vector3d v;
  std::stringstream ss(s);
  std::string cell;
  int i = 0;
  while (std::getline(ss, cell, ',')) {
    if (i >= 3) throw std::invalid_argument("expected x,y,z triple: " + s);
    try {
      v[i++] = std::stod(cell);
    } catch (const std::exception&) {
      throw std::invalid_argument("expected x,y,z triple: " + s);
    }
  }
  if (i != 3) throw std::invalid_argument("expected x,y,z triple: " + s);
  return v;
}

void parse_grid(const std::string& s, int& nt, int& np) {
  const auto x = s.find('x');
  if (x == std::string::npos)
    throw std::invalid_argument("expected --grid NxM: " + s);
  try {
    nt = std::stoi(s.substr(0, x));
    np = std::stoi(s.substr(x + 1));
  } catch (const std::exception&) {
    throw std::invalid_argument("expected --grid NxM: " + s);
  }
  if (nt < 1 || np < 1) throw std::invalid_argument("grid must be >= 1x1");
}

double unit_scale(const std::string& unit) {
  if (unit == "mhz") return 1.0;
  if (unit == "ghz") return 1000.0;
  throw std::invalid_argument("unknown unit: " + unit + " (use mhz or ghz)");
}

json fit_result_json(const FitResult& fit) {
  json params = json::object(), sigmas = json::object();
  for (std::size_t i = 0; i < fit.names.size(); ++i) {
    params[fit.names[i]] = fit.params[static_cast<Eigen::Index>(i)];
    const double s = fit.sigmas[static_cast<Eigen::Index>(i)];
    sigmas[fit.names[i]] = std::isfinite(s) ? json(s) : json();
  }
  json out;
  out["params"] = params;
  out["sigmas"] = sigmas;
  out["chi2_reduced"] = fit.chi2_reduced;
  out["converged"] = fit.converged;
  out["n_iter"] = fit.n_iter;
  out["at_bounds"] = fit.at_bounds;
  if (!fit.message.empty()) out["message"] = fit.message;
  return out;
}

void emit(const std::string& out_path, const std::string& text) {
  if (out_path.empty() || out_path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw std::runtime_error("cannot write file: " + out_path);
  out << text;
}

// holes for a field direction, evaluated at a reference magnitude (g_h is
// field-magnitude independent to < 0.1% in the regime modeled here)
HoleGFactors holes_for_direction(const RunConfig& cfg, const Eigen::Vector3d& dir,
                                 double ref_b_gauss) {
  const HoleModel model = cfg.hole_model();
  const OrientationSet orient = enumerate_orientations(model.strain);
  return compute_hole_g(model, orient, FieldSpec::along(dir, ref_b_gauss));
}

std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    out[static_cast<std::size_t>(i)] =
        n == 1 ? lo : lo + (hi - lo) * i / (n - 1);
  return out;
}

int run_app(const std::vector<std::string>& args) {
  CLI::App app{"T-centre ensemble hyperpolarization and linewidth toolkit"};
  app.require_subcommand(1);
  std::function<int()> action;

  std::string config_path;
  app.add_option("--config", config_path,
                 "JSON config path (default: $TCSD_CONFIG, else built-ins)");

  // ---- gfactors -----------------------------------------------------------
  {
    auto* cmd = app.add_subcommand(
        "gfactors", "Hole g-factors of the 12 orientational subsets");
    auto dir_s = std::make_shared<std::string>("1,0,0");
    auto axis_s = std::make_shared<std::string>();
    auto incl = std::make_shared<double>(0.0);
    auto azim = std::make_shared<double>(0.0);
    auto b = std::make_shared<double>(100.0);
    auto doublet = std::make_shared<std::string>();
    auto incl_err = std::make_shared<double>(0.0);
    auto azim_err = std::make_shared<double>(0.0);
    auto n_samples = std::make_shared<int>(2000);
    auto seed = std::make_shared<std::uint64_t>(1);
    auto out_path = std::make_shared<std::string>();
    auto serial = std::make_shared<bool>(false);
    cmd->add_option("--dir", *dir_s, "field direction x,y,z (crystal frame)")
        ->capture_default_str();
    cmd->add_option("--axis", *axis_s,
                    "nominal axis x,y,z tilted by --incl-deg/--azim-deg");
    cmd->add_option("--incl-deg", *incl, "inclination from the nominal axis");
    cmd->add_option("--azim-deg", *azim, "azimuth about the nominal axis");
    cmd->add_option("--b-gauss", *b, "field magnitude")->capture_default_str();
    cmd->add_option("--doublet", *doublet, "lower|upper (overrides config)");
    cmd->add_option("--incl-err-deg", *incl_err,
                    "inclination alignment error for Monte-Carlo sigmas");
    cmd->add_option("--azim-err-deg", *azim_err, "azimuth alignment error");
    cmd->add_option("--n-samples", *n_samples, "Monte-Carlo samples")
        ->capture_default_str();
    cmd->add_option("--seed", *seed, "Monte-Carlo seed")->capture_default_str();
    cmd->add_option("--out", *out_path, "output CSV path (default stdout)");
    cmd->add_flag("--serial", *serial, "disable the parallel kernels");
    cmd->callback([&, dir_s, axis_s, incl, azim, b, doublet, incl_err, azim_err,
                   n_samples, seed, out_path, serial, cmd] {
      action = [=, &config_path] {
        RunConfig cfg = resolve_config(config_path);
        if (!doublet->empty()) cfg.doublet = *doublet;
        const HoleModel model = cfg.hole_model();
        const OrientationSet orient = enumerate_orientations(model.strain);

        FieldSpec field;
        const bool tilted = cmd->count("--axis") > 0;
        if (tilted)
          field = FieldSpec::tilted(parse_triple(*axis_s),
                                    *incl * kPi / 180.0, *azim * kPi / 180.0, *b);
        else
          field = FieldSpec::along(parse_triple(*dir_s), *b);

        HoleGFactors holes;
        if (*incl_err > 0.0 || *azim_err > 0.0)
          holes = propagate_alignment_uncertainty(
              model, orient, field, *incl_err, *azim_err, *n_samples, *seed,
              *serial ? Exec::serial : Exec::parallel);
        else
          holes = compute_hole_g(model, orient, field);

        std::ostringstream os;
        os << "g_h,multiplicity,sigma\n";
        for (const auto& e : holes.entries)
          os << format_double(e.g_h) << ',' << e.multiplicity << ','
             << format_double(e.sigma) << '\n';
        emit(*out_path, os.str());
        return kExitOk;
      };
    });
  }

  // ---- calibrate-g --------------------------------------------------------
  {
    auto* cmd = app.add_subcommand(
        "calibrate-g", "Fit g1/g2 and field angles to 12 measured g-factors");
    auto input = std::make_shared<std::string>();
    auto axis_s = std::make_shared<std::string>("1,1,0");
    auto b = std::make_shared<double>(100.0);
    auto out_path = std::make_shared<std::string>();
    cmd->add_option("--measured", *input, "CSV with columns g_h,sigma (12 rows)")
        ->required();
    cmd->add_option("--axis", *axis_s, "nominal field axis")->capture_default_str();
    cmd->add_option("--b-gauss", *b, "field magnitude")->capture_default_str();
    cmd->add_option("--out", *out_path, "output JSON path (default stdout)");
    cmd->callback([&, input, axis_s, b, out_path] {
      action = [=, &config_path] {
        const RunConfig cfg = resolve_config(config_path);
        std::vector<double> g, sigma;
        parse_gfactor_csv(*input, g, sigma);
        const FitResult fit = fit_gfactor_calibration(
            g, sigma, cfg.strain, parse_triple(*axis_s), *b);
        emit(*out_path, fit_result_json(fit).dump(2) + "\n");
        return fit.converged ? kExitOk : kExitNoConvergence;
      };
    });
  }

  // ---- simulate-sweep -----------------------------------------------------
  {
    auto* cmd = app.add_subcommand(
        "simulate-sweep", "Synthetic amplitude-vs-field sweep at Delta = 0");
    auto gamma = std::make_shared<double>(27.0);
    auto dir_s = std::make_shared<std::string>("1,0,0");
    auto b_max = std::make_shared<double>(500.0);
    auto n_pts = std::make_shared<int>(50);
    auto noise = std::make_shared<double>(0.0);
    auto seed = std::make_shared<std::uint64_t>(1);
    auto r = std::make_shared<double>(0.0);
    auto inhom_fwhm = std::make_shared<double>(0.0);
    auto inhom_kind = std::make_shared<std::string>("gaussian");
    auto ref_b = std::make_shared<double>(100.0);
    auto out_path = std::make_shared<std::string>();
    auto serial = std::make_shared<bool>(false);
    cmd->add_option("--gamma-mhz", *gamma, "homogeneous width")
        ->capture_default_str();
    cmd->add_option("--dir", *dir_s, "field direction")->capture_default_str();
    cmd->add_option("--b-max-gauss", *b_max, "sweep endpoint")
        ->capture_default_str();
    cmd->add_option("--n-points", *n_pts, "points from 0 to b-max")
        ->capture_default_str();
    cmd->add_option("--noise", *noise, "additive Gaussian noise sigma")
        ->capture_default_str();
    cmd->add_option("--seed", *seed, "noise seed")->capture_default_str();
    cmd->add_option("--r", *r, "cross-spin branch amplitude ratio")
        ->capture_default_str();
    cmd->add_option("--inhom-fwhm-mhz", *inhom_fwhm,
                    "inhomogeneous width (0 = homogeneous model)");
    cmd->add_option("--inhom-kind", *inhom_kind, "lorentzian|gaussian|glp")
        ->capture_default_str();
    cmd->add_option("--holes-b-gauss", *ref_b,
                    "reference field for the subset g-factors")
        ->capture_default_str();
    cmd->add_option("--out", *out_path, "output CSV path (default stdout)");
    cmd->add_flag("--serial", *serial, "disable the parallel kernels");
    cmd->callback([&, gamma, dir_s, b_max, n_pts, noise, seed, r, inhom_fwhm,
                   inhom_kind, ref_b, out_path, serial] {
      action = [=, &config_path] {
        const RunConfig cfg = resolve_config(config_path);
        HyperpolModel model;
        model.gamma_mhz = *gamma;
        model.g_e = cfg.g_e;
        model.holes = holes_for_direction(cfg, parse_triple(*dir_s), *ref_b);
        model.branch_ratio_r = *r;
        if (*inhom_fwhm > 0.0)
          model.inhom = LineshapeSpec{profile_kind_from_string(*inhom_kind),
                                      *inhom_fwhm};
        const SweepData sweep = simulate_sweep(
            model, linspace(0.0, *b_max, *n_pts), *noise, *seed,
            *serial ? Exec::serial : Exec::parallel);
        std::ostringstream os;
        os << "b_gauss,amplitude,sigma\n";
        for (std::size_t i = 0; i < sweep.size(); ++i)
          os << format_double(sweep.b_gauss[i]) << ','
             << format_double(sweep.amplitude[i]) << ','
             << format_double(sweep.sigma[i]) << '\n';
        emit(*out_path, os.str());
        return kExitOk;
      };
    });
  }

  // ---- simulate-map -------------------------------------------------------
  {
    auto* cmd = app.add_subcommand("simulate-map",
                                   "Synthetic PLE map over (B, Delta)");
    auto gamma = std::make_shared<double>(250.0);
    auto dir_s = std::make_shared<std::string>("1,0,0");
    auto b_max = std::make_shared<double>(500.0);
    auto n_b = std::make_shared<int>(26);
    auto d_max = std::make_shared<double>(1000.0);
    auto n_d = std::make_shared<int>(101);
    auto r = std::make_shared<double>(0.0);
    auto ref_b = std::make_shared<double>(100.0);
    auto out_path = std::make_shared<std::string>();
    auto serial = std::make_shared<bool>(false);
    cmd->add_option("--gamma-mhz", *gamma, "homogeneous width")
        ->capture_default_str();
    cmd->add_option("--dir", *dir_s, "field direction")->capture_default_str();
    cmd->add_option("--b-max-gauss", *b_max, "field endpoint")
        ->capture_default_str();
    cmd->add_option("--n-b", *n_b, "field points")->capture_default_str();
    cmd->add_option("--delta-max-mhz", *d_max, "detuning half-span")
        ->capture_default_str();
    cmd->add_option("--n-delta", *n_d, "detuning points")->capture_default_str();
    cmd->add_option("--r", *r, "cross-spin branch amplitude ratio")
        ->capture_default_str();
    cmd->add_option("--holes-b-gauss", *ref_b,
                    "reference field for the subset g-factors")
        ->capture_default_str();
    cmd->add_option("--out", *out_path, "output CSV path (default stdout)");
    cmd->add_flag("--serial", *serial, "disable the parallel kernels");
    cmd->callback([&, gamma, dir_s, b_max, n_b, d_max, n_d, r, ref_b, out_path,
                   serial] {
      action = [=, &config_path] {
        const RunConfig cfg = resolve_config(config_path);
        HyperpolModel model;
        model.gamma_mhz = *gamma;
        model.g_e = cfg.g_e;
        model.holes = holes_for_direction(cfg, parse_triple(*dir_s), *ref_b);
        model.branch_ratio_r = *r;
        const PLEMap map = simulate_map(
            model, linspace(0.0, *b_max, *n_b), linspace(-*d_max, *d_max, *n_d),
            *serial ? Exec::serial : Exec::parallel);
        std::ostringstream os;
        os << "b_gauss,delta_mhz,amplitude\n";
        for (std::size_t i = 0; i < map.b_gauss.size(); ++i)
          for (std::size_t j = 0; j < map.delta_mhz.size(); ++j)
            os << format_double(map.b_gauss[i]) << ','
               << format_double(map.delta_mhz[j]) << ','
               << format_double(map.amplitude[i][j]) << '\n';
        emit(*out_path, os.str());
        return kExitOk;
      };
    });
  }

  // ---- fit-spectrum -------------------------------------------------------
  {
    auto* cmd = app.add_subcommand(
        "fit-spectrum", "Fit a residual-field PLE spectrum linewidth");
    auto input = std::make_shared<std::string>();
    auto shape = std::make_shared<std::string>("lorentzian");
    auto b = std::make_shared<double>(0.0);
    auto dir_s = std::make_shared<std::string>("1,0,0");
    auto unit = std::make_shared<std::string>("mhz");
    auto out_path = std::make_shared<std::string>();
    cmd->add_option("--input", *input, "spectrum CSV (delta_mhz,counts[,sigma])")
        ->required();
    cmd->add_option("--shape", *shape, "lorentzian|gaussian|glp")
        ->capture_default_str();
    cmd->add_option("--b-gauss", *b, "residual field magnitude")
        ->capture_default_str();
    cmd->add_option("--dir", *dir_s, "residual field direction")
        ->capture_default_str();
    cmd->add_option("--unit", *unit, "detuning unit of the input file (mhz|ghz)")
        ->capture_default_str();
    cmd->add_option("--out", *out_path, "output JSON path (default stdout)");
    cmd->callback([&, input, shape, b, dir_s, unit, out_path] {
      action = [=, &config_path] {
        const RunConfig cfg = resolve_config(config_path);
        SpectrumData spec = parse_spectrum_csv(*input);
        const double scale = unit_scale(*unit);
        for (auto& d : spec.delta_mhz) d *= scale;

        SpectrumFitOptions opt;
        opt.shape = profile_kind_from_string(*shape);
        opt.residual_b_gauss = *b;
        opt.g_e = cfg.g_e;
        if (*b > 0.0)
          opt.holes = holes_for_direction(cfg, parse_triple(*dir_s),
                                          std::max(*b, 1.0));
        const FitResult fit = fit_linewidth_spectrum(spec, opt);
        emit(*out_path, fit_result_json(fit).dump(2) + "\n");
        return fit.converged ? kExitOk : kExitNoConvergence;
      };
    });
  }

  // ---- fit-sweep ----------------------------------------------------------
  {
    auto* cmd = app.add_subcommand(
        "fit-sweep", "Fit the spectral-diffusion width of a field sweep");
    auto input = std::make_shared<std::string>();
    auto mode = std::make_shared<std::string>("homogeneous");
    auto inhom_fwhm = std::make_shared<double>(0.0);
    auto inhom_kind = std::make_shared<std::string>("gaussian");
    auto weight_mode = std::make_shared<std::string>("equal");
    auto r = std::make_shared<double>(0.0);
    auto dir_s = std::make_shared<std::string>("1,0,0");
    auto ref_b = std::make_shared<double>(100.0);
    auto fit_offset = std::make_shared<bool>(false);
    auto out_path = std::make_shared<std::string>();
    auto serial = std::make_shared<bool>(false);
    cmd->add_option("--input", *input, "sweep CSV (b_gauss,amplitude[,sigma])")
        ->required();
    cmd->add_option("--mode", *mode, "homogeneous|convolved")
        ->capture_default_str();
    cmd->add_option("--inhom-fwhm-mhz", *inhom_fwhm,
                    "inhomogeneous width (required for convolved mode)");
    cmd->add_option("--inhom-kind", *inhom_kind, "lorentzian|gaussian|glp")
        ->capture_default_str();
    cmd->add_option("--weight-mode", *weight_mode,
                    "equal|single-min|single-max (bounding sets)")
        ->capture_default_str();
    cmd->add_option("--r", *r, "cross-spin branch amplitude ratio")
        ->capture_default_str();
    cmd->add_option("--dir", *dir_s, "field direction for the subset g-factors")
        ->capture_default_str();
    cmd->add_option("--holes-b-gauss", *ref_b,
                    "reference field for the subset g-factors")
        ->capture_default_str();
    cmd->add_flag("--fit-offset", *fit_offset, "free additive offset");
    cmd->add_option("--out", *out_path, "output JSON path (default stdout)");
    cmd->add_flag("--serial", *serial, "disable the parallel kernels");
    cmd->callback([&, input, mode, inhom_fwhm, inhom_kind, weight_mode, r, dir_s,
                   ref_b, fit_offset, out_path, serial] {
      action = [=, &config_path] {
        const RunConfig cfg = resolve_config(config_path);
        const SweepData sweep = parse_sweep_csv(*input);

        GammaSdOptions opt;
        if (*mode == "convolved") {
          if (!(*inhom_fwhm > 0.0))
            throw std::invalid_argument(
                "fit-sweep: convolved mode requires --inhom-fwhm-mhz > 0");
          opt.inhom_fwhm_mhz = *inhom_fwhm;
          opt.inhom_kind = profile_kind_from_string(*inhom_kind);
        } else if (*mode != "homogeneous") {
          throw std::invalid_argument("fit-sweep: unknown --mode " + *mode);
        }
        opt.weight_mode = weight_mode_from_string(*weight_mode);
        opt.branch_ratio_r = *r;
        opt.fit_offset = *fit_offset;
        opt.mask_chi2 = cfg.mask_chi2;
        opt.exec = *serial ? Exec::serial : Exec::parallel;

        const HoleGFactors holes =
            holes_for_direction(cfg, parse_triple(*dir_s), *ref_b);
        const FitResult fit = fit_gamma_sd(sweep, holes, cfg.g_e, opt);
        emit(*out_path, fit_result_json(fit).dump(2) + "\n");
        return fit.converged ? kExitOk : kExitNoConvergence;
      };
    });
  }

  // ---- orientation-bound --------------------------------------------------
  {
    auto* cmd = app.add_subcommand(
        "orientation-bound",
        "Scan field orientations, re-fit gamma_sd, report the converged maximum");
    auto input = std::make_shared<std::string>();
    auto grid_s = std::make_shared<std::string>("16x16");
    auto inhom_fwhm = std::make_shared<double>(0.0);
    auto inhom_kind = std::make_shared<std::string>("gaussian");
    auto r = std::make_shared<double>(0.0);
    auto ref_b = std::make_shared<double>(100.0);
    auto map_out = std::make_shared<std::string>();
    auto out_path = std::make_shared<std::string>();
    auto serial = std::make_shared<bool>(false);
    cmd->add_option("--input", *input, "sweep CSV")->required();
    cmd->add_option("--grid", *grid_s, "theta x phi grid, e.g. 16x16")
        ->capture_default_str();
    cmd->add_option("--inhom-fwhm-mhz", *inhom_fwhm,
                    "inhomogeneous width (0 = homogeneous model)");
    cmd->add_option("--inhom-kind", *inhom_kind, "lorentzian|gaussian|glp")
        ->capture_default_str();
    cmd->add_option("--r", *r, "cross-spin branch amplitude ratio")
        ->capture_default_str();
    cmd->add_option("--holes-b-gauss", *ref_b,
                    "reference field for the subset g-factors")
        ->capture_default_str();
    cmd->add_option("--map-out", *map_out,
                    "CSV of converged grid points (theta_rad,phi_rad,gamma_sd_mhz)");
    cmd->add_option("--out", *out_path, "output JSON path (default stdout)");
    cmd->add_flag("--serial", *serial, "run the grid serially");
    cmd->callback([&, input, grid_s, inhom_fwhm, inhom_kind, r, ref_b, map_out,
                   out_path, serial] {
      action = [=, &config_path] {
        const RunConfig cfg = resolve_config(config_path);
        const SweepData sweep = parse_sweep_csv(*input);

        OrientationSweepOptions opt;
        parse_grid(*grid_s, opt.n_theta, opt.n_phi);
        if (*inhom_fwhm > 0.0) {
          opt.fit.inhom_fwhm_mhz = *inhom_fwhm;
          opt.fit.inhom_kind = profile_kind_from_string(*inhom_kind);
        }
        opt.fit.branch_ratio_r = *r;
        opt.fit.mask_chi2 = cfg.mask_chi2;
        opt.exec = *serial ? Exec::serial : Exec::parallel;

        const HoleModel model = cfg.hole_model();
        const OrientationSet orient = enumerate_orientations(model.strain);
        const double b_ref = *ref_b;
        const HolesBuilder builder = [&model, &orient, b_ref](double th,
                                                              double ph) {
          const Eigen::Vector3d dir(std::sin(th) * std::cos(ph),
                                    std::sin(th) * std::sin(ph), std::cos(th));
          return compute_hole_g(model, orient, FieldSpec::along(dir, b_ref));
        };

        const OrientationMap map =
            orientation_bound_sweep(sweep, builder, cfg.g_e, opt);

        if (!map_out->empty()) {
          std::ostringstream os;
          os << "theta_rad,phi_rad,gamma_sd_mhz\n";
          for (std::size_t i = 0; i < map.theta_rad.size(); ++i)
            for (std::size_t j = 0; j < map.phi_rad.size(); ++j)
              if (map.converged[i][j])
                os << format_double(map.theta_rad[i]) << ','
                   << format_double(map.phi_rad[j]) << ','
                   << format_double(map.gamma_sd_mhz[i][j]) << '\n';
          emit(*map_out, os.str());
        }

        json out;
        out["params"] = {{"theta_rad", map.max_point.theta_rad},
                         {"phi_rad", map.max_point.phi_rad},
                         {"gamma_sd_mhz", map.max_point.gamma_sd_mhz}};
        out["sigmas"] = json::object();
        out["chi2_reduced"] = json();
        out["converged"] = true;
        emit(*out_path, out.dump(2) + "\n");
        return kExitOk;
      };
    });
  }

  // ---- map-linewidths -----------------------------------------------------
  {
    auto* cmd = app.add_subcommand(
        "map-linewidths", "Lorentzian linewidth of every fixed-B map row");
    auto input = std::make_shared<std::string>();
    auto unit = std::make_shared<std::string>("mhz");
    auto out_path = std::make_shared<std::string>();
    auto serial = std::make_shared<bool>(false);
    cmd->add_option("--input", *input, "map CSV (b_gauss,delta_mhz,amplitude)")
        ->required();
    cmd->add_option("--unit", *unit, "detuning unit of the input file (mhz|ghz)")
        ->capture_default_str();
    cmd->add_option("--out", *out_path, "output CSV path (default stdout)");
    cmd->add_flag("--serial", *serial, "disable the parallel kernels");
    cmd->callback([&, input, unit, out_path, serial] {
      action = [=] {
        PLEMap map = parse_map_csv(*input);
        const double scale = unit_scale(*unit);
        for (auto& d : map.delta_mhz) d *= scale;
        const std::vector<LinewidthRow> rows =
            map_linewidths(map, *serial ? Exec::serial : Exec::parallel);
        std::ostringstream os;
        os << "b_gauss,fwhm_mhz,sigma\n";
        for (const auto& row : rows)
          os << format_double(row.b_gauss) << ',' << format_double(row.fwhm_mhz)
             << ',' << format_double(row.sigma_mhz) << '\n';
        emit(*out_path, os.str());
        return kExitOk;
      };
    });
  }

  // ---- indist -------------------------------------------------------------
  {
    auto* cmd = app.add_subcommand(
        "indist", "Two-photon indistinguishability from gamma_sd");
    auto gamma_sd = std::make_shared<double>(0.0);
    auto xi = std::make_shared<double>(-1.0);
    auto gamma1 = std::make_shared<double>(-1.0);
    auto out_path = std::make_shared<std::string>();
    cmd->add_option("--gamma-sd-mhz", *gamma_sd, "spectral-diffusion width")
        ->required();
    cmd->add_option("--xi", *xi, "Debye-Waller factor (default from config)");
    cmd->add_option("--gamma1-mhz", *gamma1,
                    "lifetime-limited width (default from config)");
    cmd->add_option("--out", *out_path, "output JSON path (default stdout)");
    cmd->callback([&, gamma_sd, xi, gamma1, out_path] {
      action = [=, &config_path] {
        const RunConfig cfg = resolve_config(config_path);
        const Indistinguishability ind = indistinguishability(
            *gamma_sd, *xi > 0.0 ? *xi : cfg.xi,
            *gamma1 > 0.0 ? *gamma1 : cfg.gamma1_mhz);
        json out;
        out["params"] = {{"value", ind.value},
                         {"gamma_sd_mhz", ind.gamma_sd_mhz},
                         {"xi", ind.xi},
                         {"gamma1_mhz", ind.gamma1_mhz}};
        out["sigmas"] = json::object();
        out["chi2_reduced"] = json();
        out["converged"] = true;
        emit(*out_path, out.dump(2) + "\n");
        return kExitOk;
      };
    });
  }

  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("tcsd");
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);  // prints help, exit 0
  } catch (const CLI::ParseError& e) {
    app.exit(e);  // prints the error and usage hint
    return kExitUsage;
  }

  if (!action) return kExitUsage;
  return action();
}

}  // namespace

int dispatch(const std::vector<std::string>& args) {
  try {
    return run_app(args);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }
}

}  // namespace tcsd
