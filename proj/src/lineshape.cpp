#include "tcsd/lineshape.hpp"

#include <cmath>
#include <stdexcept>

namespace tcsd {
namespace {

constexpr double kLn2 = 0.6931471805599453094;
constexpr double kPi = 3.1415926535897932385;

// Unnormalized GLP with component FWHM w_c = 1: gaussian * lorentzian, both
// of unit FWHM and unit peak.
double glp_unit(double x) {
  return std::exp(-4.0 * kLn2 * x * x) / (1.0 + 4.0 * x * x);
}

// FWHM of the unit-component GLP, found once by bisection on the half-max
// crossing (the product is strictly decreasing in |x|).
double glp_unit_fwhm() {
  double lo = 0.0, hi = 1.0;
  for (int i = 0; i < 100; ++i) {
    const double mid = 0.5 * (lo + hi);
    (glp_unit(mid) > 0.5 ? lo : hi) = mid;
  }
  return lo + hi;  // twice the half-width
}

}  // namespace

ProfileKind profile_kind_from_string(const std::string& s) {
  if (s == "lorentzian") return ProfileKind::lorentzian;
  if (s == "gaussian") return ProfileKind::gaussian;
  if (s == "glp") return ProfileKind::glp;
  throw std::invalid_argument("unknown profile kind: " + s);
}

std::string to_string(ProfileKind kind) {
  switch (kind) {
    case ProfileKind::lorentzian: return "lorentzian";
    case ProfileKind::gaussian: return "gaussian";
    case ProfileKind::glp: return "glp";
  }
  throw std::invalid_argument("unknown profile kind");
}

void LineshapeSpec::validate() const {
  if (!(fwhm_mhz > 0.0))
    throw std::invalid_argument("LineshapeSpec: fwhm must be > 0 MHz");
}

double glp_fwhm_ratio() {
  static const double ratio = glp_unit_fwhm();
  return ratio;
}

double glp_component_fwhm(double product_fwhm) {
  if (!(product_fwhm > 0.0))
    throw std::invalid_argument("glp_component_fwhm: fwhm must be > 0");
  // bisection on [F, 4F]; product FWHM grows monotonically with w_c
  double lo = product_fwhm, hi = 4.0 * product_fwhm;
  for (int i = 0; i < 100; ++i) {
    const double wc = 0.5 * (lo + hi);
    (wc * glp_fwhm_ratio() < product_fwhm ? lo : hi) = wc;
  }
  return 0.5 * (lo + hi);
}

double profile(const LineshapeSpec& spec, double x_mhz) {
  spec.validate();
  const double f = spec.fwhm_mhz;
  switch (spec.kind) {
    case ProfileKind::lorentzian: {
      const double u = 2.0 * x_mhz / f;
      return 2.0 / (kPi * f) / (1.0 + u * u);
    }
    case ProfileKind::gaussian: {
      const double u = x_mhz / f;
      return 2.0 / f * std::sqrt(kLn2 / kPi) * std::exp(-4.0 * kLn2 * u * u);
    }
    case ProfileKind::glp: {
      const double wc = glp_component_fwhm(f);
      // area of exp(-4 ln2 x^2/wc^2) / (1 + (2x/wc)^2) is pi wc erfc(sqrt(ln2))
      const double area = kPi * wc * std::erfc(std::sqrt(kLn2));
      return glp_unit(x_mhz / wc) / area;
    }
  }
  throw std::invalid_argument("unknown profile kind");
}

}  // namespace tcsd
