#pragma once

#include <numbers>

namespace negspec {

inline constexpr double pi = std::numbers::pi;
inline constexpr double pi2 = pi * pi;
inline constexpr double pi4 = pi2 * pi2;
inline constexpr double pi5 = pi4 * pi;

// proximity to r = |tau|, relative to max(r, |tau|)
inline constexpr double lightcone_tol = 1e-12;

// |k tau| below which sin(k tau)/tau switches to its Taylor series
inline constexpr double series_tol = 1e-3;

// Denominator of the inflationary density spectrum, read as 30 pi^2.
inline constexpr double inflation_denominator = 30.0 * pi2;

// Prefactor of the total-derivative form of the energy density correlator.
inline constexpr double total_derivative_prefactor = -1.0 / (3840.0 * pi4);

inline constexpr const char* version_string = "1.0.0";

} // namespace negspec
