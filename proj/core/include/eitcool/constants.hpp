#pragma once

#include <numbers>

// CODATA 2018 exact and recommended values, SI units.
namespace eitcool::constants {

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

inline constexpr double hbar = 1.054571817e-34;        // J s
inline constexpr double boltzmann = 1.380649e-23;      // J / K
inline constexpr double bohr_magneton = 9.2740100783e-24;  // J / T
inline constexpr double electron_g = 2.0028;           // NV ground-state g factor

}  // namespace eitcool::constants
