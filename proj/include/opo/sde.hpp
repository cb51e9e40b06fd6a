#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <string>

#include "opo/rng.hpp"

namespace opo {

using cplx = std::complex<double>;

template <std::size_t N>
using State = std::array<cplx, N>;

// Doubled-phase-space amplitudes of the two signal modes; the plus-marked
// entries are independent of the unmarked ones (not complex conjugates),
// although conjugate-symmetric initial data keeps them conjugate in law.
struct SignalView {
  cplx bp, bpp, bm, bmp;  // beta_+1, beta_+1^+, beta_-1, beta_-1^+
};

enum class SystemKind { full, adiabatic, reduced };

SystemKind parse_system_kind(const std::string& name);
std::string to_string(SystemKind k);

// ---------------------------------------------------------------------------
// The three Langevin systems.  All use two independent complex Wiener
// increments per step; the conjugate-marked rows take the conjugated noise.
// The multiplicative noise factor is the principal branch of sqrt(beta_0).
// ---------------------------------------------------------------------------

// Pump + signal, state (b0, b0^+, b+1, b+1^+, b-1, b-1^+).
struct Full6 {
  static constexpr std::size_t dim = 6;
  double sigma, kappa, g;

  State<6> drift(const State<6>& b) const {
    return {kappa * (sigma - b[0] - b[2] * b[4]),
            kappa * (sigma - b[1] - b[3] * b[5]),
            -b[2] + b[0] * b[5],
            -b[3] + b[1] * b[4],
            -b[4] + b[0] * b[3],
            -b[5] + b[1] * b[2]};
  }
  State<6> noise(const State<6>& b, const std::array<cplx, 2>& w) const {
    const cplx n0 = g * std::sqrt(b[0]);
    const cplx n1 = g * std::sqrt(b[1]);
    return {0.0, 0.0, n0 * w[0], n1 * w[1], n0 * std::conj(w[0]), n1 * std::conj(w[1])};
  }
  SignalView signal(const State<6>& b) const { return {b[2], b[3], b[4], b[5]}; }
  std::array<cplx, 2> pump(const State<6>& b) const { return {b[0], b[1]}; }
  State<6> steady_state() const {
    const double rho = std::sqrt(sigma - 1.0);
    return {1.0, 1.0, rho, rho, rho, rho};
  }
  // distance from the conjugate-symmetric manifold
  double symmetry_deviation(const State<6>& b) const {
    return std::max(std::abs(b[4] - std::conj(b[2])), std::abs(b[5] - std::conj(b[3])));
  }
};

// Signal only, pump eliminated through beta_0 = sigma - b+1 b-1 (and the
// plus-marked counterpart).  Stratonovich form; the drift carries the g^2/4
// term produced by the elimination, so the midpoint scheme applies directly.
// The Ito drift (correction = 1) is kept accessible as a test fixture.
struct Adiabatic4 {
  static constexpr std::size_t dim = 4;  // (b+1, b+1^+, b-1, b-1^+)
  double sigma, g;
  bool stratonovich = true;

  cplx pump0(const State<4>& b) const { return sigma - b[0] * b[2]; }
  cplx pump0p(const State<4>& b) const { return sigma - b[1] * b[3]; }

  State<4> drift(const State<4>& b) const {
    const double c = stratonovich ? 1.0 - 0.25 * g * g : 1.0;
    const cplx b0 = pump0(b), b0p = pump0p(b);
    return {-c * b[0] + b0 * b[3],
            -c * b[1] + b0p * b[2],
            -c * b[2] + b0 * b[1],
            -c * b[3] + b0p * b[0]};
  }
  State<4> noise(const State<4>& b, const std::array<cplx, 2>& w) const {
    const cplx n0 = g * std::sqrt(pump0(b));
    const cplx n1 = g * std::sqrt(pump0p(b));
    return {n0 * w[0], n1 * w[1], n0 * std::conj(w[0]), n1 * std::conj(w[1])};
  }
  SignalView signal(const State<4>& b) const { return {b[0], b[1], b[2], b[3]}; }
  std::array<cplx, 2> pump(const State<4>& b) const { return {pump0(b), pump0p(b)}; }
  State<4> steady_state() const {
    const double rho = std::sqrt(sigma - 1.0);
    return {rho, rho, rho, rho};
  }
};

// Conjugate-reduced system on the invariant manifold beta_-1 = conj(beta_+1),
// beta_-1^+ = conj(beta_+1^+): state (b0, b0^+, b+1, b+1^+).  Only the two
// non-conjugated noises are drawn; the partner rows are implicit.
struct Reduced4 {
  static constexpr std::size_t dim = 4;
  double sigma, kappa, g;

  State<4> drift(const State<4>& b) const {
    return {kappa * (sigma - b[0] - b[2] * std::conj(b[2])),
            kappa * (sigma - b[1] - b[3] * std::conj(b[3])),
            -b[2] + b[0] * std::conj(b[3]),
            -b[3] + b[1] * std::conj(b[2])};
  }
  State<4> noise(const State<4>& b, const std::array<cplx, 2>& w) const {
    return {0.0, 0.0, g * std::sqrt(b[0]) * w[0], g * std::sqrt(b[1]) * w[1]};
  }
  SignalView signal(const State<4>& b) const {
    return {b[2], b[3], std::conj(b[2]), std::conj(b[3])};
  }
  std::array<cplx, 2> pump(const State<4>& b) const { return {b[0], b[1]}; }
  State<4> steady_state() const {
    const double rho = std::sqrt(sigma - 1.0);
    return {1.0, 1.0, rho, rho};
  }
};

// ---------------------------------------------------------------------------
// Semi-implicit midpoint step (Stratonovich-consistent).  The same noise
// realization is reused while the midpoint is iterated, then applied once.
// ---------------------------------------------------------------------------

template <class Sys>
inline void midpoint_step(const Sys& sys, State<Sys::dim>& b, double dtau,
                          const std::array<cplx, 2>& w, int iters) {
  State<Sys::dim> cur = b;
  for (int p = 0; p < iters; ++p) {
    const auto a = sys.drift(cur);
    const auto n = sys.noise(cur, w);
    for (std::size_t i = 0; i < Sys::dim; ++i) cur[i] = b[i] + 0.5 * (dtau * a[i] + n[i]);
  }
  const auto a = sys.drift(cur);
  const auto n = sys.noise(cur, w);
  for (std::size_t i = 0; i < Sys::dim; ++i) b[i] += dtau * a[i] + n[i];
}

// Explicit Euler-Maruyama (Ito-consistent); test fixture for the
// Stratonovich/Ito drift-correction checks.
template <class Sys>
inline void euler_step(const Sys& sys, State<Sys::dim>& b, double dtau,
                       const std::array<cplx, 2>& w) {
  const auto a = sys.drift(b);
  const auto n = sys.noise(b, w);
  for (std::size_t i = 0; i < Sys::dim; ++i) b[i] += dtau * a[i] + n[i];
}

// ---------------------------------------------------------------------------
// Orientation extraction and quadratures
// ---------------------------------------------------------------------------

// Half-angle orientation in (-pi/2, pi/2] from e^{2 i theta} = bm bpp / |bm bpp|.
inline double theta_raw(const SignalView& s) {
  return 0.5 * std::arg(s.bm * s.bpp);
}

// Continuous orientation: shift theta_raw by the pi multiple closest to prev.
inline double theta_unwrap(double raw, double prev) {
  return raw + constants::pi * std::round((prev - raw) / constants::pi);
}

// Dark-mode quadrature at LO angle phi in a frame rotated by theta
// (theta = 0 gives the laboratory / fixed-LO quadrature X_01^phi).
inline cplx dark_quadrature(const SignalView& s, double theta, double phi) {
  const cplx i(0.0, 1.0);
  const cplx ep = std::exp(cplx(0.0, theta));
  const cplx em = std::exp(cplx(0.0, -theta));
  const cplx lo = std::exp(cplx(0.0, -phi));
  const cplx z = i / std::sqrt(2.0) * lo * (ep * s.bp - em * s.bm);
  const cplx zp = i / std::sqrt(2.0) * std::conj(lo) * (em * s.bpp - ep * s.bmp);
  return z - zp;
}

// ---------------------------------------------------------------------------
// Single-trajectory driver
// ---------------------------------------------------------------------------

struct TrajectoryStatus {
  bool ok = true;
  long steps_done = 0;
  long branch_crossings = 0;  // samples with Re(pump amplitude) <= 0
  double sym_dev = 0.0;       // final-time conjugate-symmetry deviation (Full6)
};

template <class Sys, class Recorder>
TrajectoryStatus integrate_trajectory(const Sys& sys, State<Sys::dim> b, double dtau, long nsteps,
                                      int iters, double blowup, TrajectoryRng& rng,
                                      Recorder&& rec) {
  TrajectoryStatus st;
  const double b2max = blowup * blowup;
  rec(0L, b);
  for (long n = 1; n <= nsteps; ++n) {
    std::array<cplx, 2> w = {rng.complex_wiener(dtau), rng.complex_wiener(dtau)};
    midpoint_step(sys, b, dtau, w, iters);
    bool bad = false;
    for (std::size_t i = 0; i < Sys::dim; ++i) {
      const double m2 = std::norm(b[i]);
      if (!(m2 < b2max)) { bad = true; break; }
    }
    if (bad) {
      st.ok = false;
      st.steps_done = n;
      return st;
    }
    if constexpr (requires { sys.pump(b); }) {
      const auto p = sys.pump(b);
      if (p[0].real() <= 0.0 || p[1].real() <= 0.0) ++st.branch_crossings;
    }
    rec(n, b);
    st.steps_done = n;
  }
  if constexpr (requires { sys.symmetry_deviation(b); }) {
    st.sym_dev = sys.symmetry_deviation(b);
  }
  return st;
}

}  // namespace opo
