#pragma once

namespace proxsim {

// Physical constants (SI units throughout).
inline constexpr double kMuEarth      = 3.986004418e14;  // m^3/s^2
inline constexpr double kEarthRadius  = 6.378137e6;      // m, equatorial
inline constexpr double kSpeedOfLight = 299792458.0;     // m/s
inline constexpr double kBoltzmann    = 1.380649e-23;    // J/K

inline constexpr double kPi    = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

inline constexpr double deg2rad(double d) { return d * kPi / 180.0; }
inline constexpr double rad2deg(double r) { return r * 180.0 / kPi; }

}  // namespace proxsim
