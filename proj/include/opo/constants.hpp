#pragma once

namespace opo::constants {

// CODATA 2018. c is exact by definition of the metre; hbar is exact since the
// 2019 SI revision (h = 6.62607015e-34 J s); eps0 is the 2018 recommended value.
inline constexpr double c_light = 299792458.0;            // m/s
inline constexpr double hbar = 1.054571817e-34;           // J s
inline constexpr double eps0 = 8.8541878128e-12;          // F/m
inline constexpr double pi = 3.141592653589793238462643;

}  // namespace opo::constants
