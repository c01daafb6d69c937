// Wall-time comparison of the serial reference implementations against the
// OpenMP kernels. Not a correctness test (the unit suite checks serial and
// parallel results bitwise); run standalone to gauge scaling on a machine.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "tcsd/constants.hpp"
#include "tcsd/field.hpp"
#include "tcsd/fit_drivers.hpp"
#include "tcsd/hole_g.hpp"
#include "tcsd/hyperpol.hpp"
#include "tcsd/lineshape.hpp"
#include "tcsd/pipeline.hpp"
#include "tcsd/strain.hpp"

namespace {

using namespace tcsd;

constexpr double kPi = 3.1415926535897932385;

double time_once(const std::function<void()>& fn) {
  const auto t0 = std::chrono::steady_clock::now();
  fn();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

}  // namespace

int main() {
  const HoleModel model;
  const OrientationSet orientations = enumerate_orientations(model.strain);
  const HoleGFactors holes =
      compute_hole_g(model, orientations,
                     FieldSpec::along(Eigen::Vector3d(1, 0, 0), 100.0));
  const FieldSpec nominal = FieldSpec::tilted(
      Eigen::Vector3d(1, 1, 0), 10.0 * kPi / 180.0, 70.0 * kPi / 180.0, 100.0);

  auto linspace = [](double lo, double hi, int n) {
    std::vector<double> out(n);
    for (int i = 0; i < n; ++i) out[i] = lo + (hi - lo) * i / (n - 1);
    return out;
  };

  // workload inputs
  HyperpolModel map_model;
  map_model.gamma_mhz = 250.0;
  map_model.holes = holes;
  map_model.branch_ratio_r = 0.3;
  const std::vector<double> map_b = linspace(0.0, 500.0, 101);
  const std::vector<double> map_d = linspace(-1000.0, 1000.0, 401);

  HyperpolModel conv_model;
  conv_model.gamma_mhz = 16.0;
  conv_model.holes = holes;
  conv_model.inhom = LineshapeSpec{ProfileKind::gaussian, 6000.0};
  const std::vector<double> conv_b = linspace(0.0, 120.0, 40);

  HyperpolModel sweep_model;
  sweep_model.gamma_mhz = 27.0;
  sweep_model.holes = holes;
  const SweepData sweep_data =
      simulate_sweep(sweep_model, linspace(0.0, 500.0, 30), 0.0, 1);
  const HolesBuilder builder = [&](double theta, double phi) {
    const Eigen::Vector3d n(std::sin(theta) * std::cos(phi),
                            std::sin(theta) * std::sin(phi), std::cos(theta));
    return compute_hole_g(model, orientations, FieldSpec::along(n, 100.0));
  };

  struct Bench {
    std::string name;
    std::function<void(Exec)> run;
  };
  const std::vector<Bench> benches = {
      {"alignment mc, 20000 samples",
       [&](Exec exec) {
         propagate_alignment_uncertainty(model, orientations, nominal, 2.0,
                                         2.0, 20000, 7, exec);
       }},
      {"ple map, 101 x 401 cells",
       [&](Exec exec) { simulate_map(map_model, map_b, map_d, exec); }},
      {"convolved sweep, 40 points",
       [&](Exec exec) { simulate_sweep(conv_model, conv_b, 0.0, 1, exec); }},
      {"orientation sweep, 6 x 6 grid",
       [&](Exec exec) {
         OrientationSweepOptions opt;
         opt.n_theta = 6;
         opt.n_phi = 6;
         opt.exec = exec;
         orientation_bound_sweep(sweep_data, builder, kGElectron, opt);
       }},
  };

  std::printf("%-32s %10s %10s %9s\n", "workload", "serial", "parallel",
              "speedup");
  for (const auto& b : benches) {
    const double ts = time_once([&] { b.run(Exec::serial); });
    const double tp = time_once([&] { b.run(Exec::parallel); });
    std::printf("%-32s %9.3fs %9.3fs %8.2fx\n", b.name.c_str(), ts, tp,
                ts / tp);
  }
  return 0;
}
