#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>

#include "opo/constants.hpp"

namespace opo {

// Gaussian deviate of variance 1/2 from two uniforms, z in (0,1], zp in [0,1):
// r = sqrt(-log z) cos(2 pi zp).
inline double gaussian_pair(double z, double zp) {
  if (z <= 0.0 || z > 1.0) throw std::domain_error("gaussian_pair: z must be in (0,1]");
  if (zp < 0.0 || zp >= 1.0) throw std::domain_error("gaussian_pair: zp must be in [0,1)");
  return std::sqrt(-std::log(z)) * std::cos(2.0 * constants::pi * zp);
}

// Per-trajectory random stream.  The (master seed, trajectory index) pair fixes
// the stream completely, so any trajectory can be generated in isolation and
// results are independent of scheduling.  All transforms from raw 64-bit draws
// to doubles are spelled out here; no library distributions are used, which
// keeps output byte-stable across standard libraries.
class TrajectoryRng {
 public:
  TrajectoryRng(std::uint64_t master_seed, std::uint64_t traj_index) {
    std::seed_seq seq{static_cast<std::uint32_t>(master_seed),
                      static_cast<std::uint32_t>(master_seed >> 32),
                      static_cast<std::uint32_t>(traj_index),
                      static_cast<std::uint32_t>(traj_index >> 32)};
    gen_.seed(seq);
  }

  // uniform in (0,1] (safe under log)
  double uniform_open0() {
    return (static_cast<double>(gen_() >> 11) + 1.0) * 0x1.0p-53;
  }

  // uniform in [0,1)
  double uniform_half() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  // N(0, 1/2)
  double gaussian_half() {
    const double z = uniform_open0();
    const double zp = uniform_half();
    return gaussian_pair(z, zp);
  }

  // N(0, 1)
  double normal() { return std::sqrt(2.0) * gaussian_half(); }

  // Complex Wiener increment: <W> = 0, <|W|^2> = dtau, <W^2> = 0.
  std::complex<double> complex_wiener(double dtau) {
    const double s = std::sqrt(dtau);
    const double re = gaussian_half();
    const double im = gaussian_half();
    return {s * re, s * im};
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace opo
