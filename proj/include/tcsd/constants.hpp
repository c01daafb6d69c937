#pragma once

namespace tcsd {

// Internal energy unit is MHz throughout; strain Hamiltonians built from eV
// inputs are converted on construction.
inline constexpr double kEvToMhz = 2.41798924e8;       // 1 eV in MHz
inline constexpr double kMuBMhzPerGauss = 1.39962449;  // mu_B / h in MHz/G
inline constexpr double kGElectron = 2.005;            // scalar electron g-factor

// Strain / deformation defaults (dimensionless strains, eV potentials).
inline constexpr double kEpsYYDefault = -0.65e-3;
inline constexpr double kEpsZZDefault = -0.26e-3;
inline constexpr double kBDeformEvDefault = -0.8;
inline constexpr double kDDeformEvDefault = -2.7;
inline constexpr double kTiltDegDefault = 4.0;

// Hole Zeeman defaults (linear and cubic terms).
inline constexpr double kG1Default = 1.505;
inline constexpr double kG2Default = -0.138;

// Indistinguishability inputs: Debye-Waller factor and lifetime-limited width.
inline constexpr double kXiDefault = 0.23;
inline constexpr double kGamma1MhzDefault = 0.169;

}  // namespace tcsd
