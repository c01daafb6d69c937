#pragma once

#include <string>

namespace tcsd {

enum class ProfileKind { lorentzian, gaussian, glp };

ProfileKind profile_kind_from_string(const std::string& s);
std::string to_string(ProfileKind kind);

// A normalized symmetric spectral profile specified by its FWHM in MHz.
// `glp` is the pointwise product of a Gaussian and a Lorentzian sharing one
// component FWHM w_c, root-solved so the product FWHM equals `fwhm_mhz`.
struct LineshapeSpec {
  ProfileKind kind = ProfileKind::lorentzian;
  double fwhm_mhz = 1.0;

  void validate() const;  // fwhm > 0
};

// Component FWHM of the GLP whose product FWHM equals `product_fwhm`
// (bisection on [product_fwhm, 4*product_fwhm]).
double glp_component_fwhm(double product_fwhm);

// Ratio product_fwhm / component_fwhm for the equal-width GLP (a pure number).
double glp_fwhm_ratio();

// Unit-area profile density at x MHz, in 1/MHz.
double profile(const LineshapeSpec& spec, double x_mhz);

}  // namespace tcsd
