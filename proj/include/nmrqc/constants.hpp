#pragma once

#include <numbers>

namespace nmrqc::constants {

inline constexpr double pi = std::numbers::pi;
inline constexpr double hbar = 1.054571817e-34;   // J s
inline constexpr double k_b = 1.380649e-23;       // J / K
inline constexpr double mu0 = 4e-7 * pi;          // T^2 m^3 / J

// length conversions into metres
inline constexpr double cm = 1e-2;
inline constexpr double nm = 1e-9;
inline constexpr double cm2 = cm * cm;
inline constexpr double cm3 = cm * cm * cm;

inline constexpr double two_pi = 2.0 * pi;

}  // namespace nmrqc::constants
