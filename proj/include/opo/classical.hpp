#pragma once

#include <array>
#include <complex>
#include <string>
#include <vector>

namespace opo {

using cplx = std::complex<double>;

// Mean-field stationary values of (beta_0, beta_+1, beta_-1).
struct SteadyState {
  cplx b0, bp, bm;
};

// Below threshold (sigma < 1): (sigma, 0, 0).  Above: (1, rho e^{-i theta}, rho e^{+i theta})
// with rho = sqrt(sigma - 1) and theta the free pattern orientation.
SteadyState classical_steady_state(double sigma, double theta);

// Residual of the stationary equations; all three components vanish at a solution:
//   b0 - sigma + bp*bm,   bp - b0*conj(bm),   bm - b0*conj(bp)
std::array<cplx, 3> classical_residual(const SteadyState& s, double sigma);

// Eigenvalues of the real-ified Jacobian (6x6) of the classical equations about s.
// Below threshold these are {-kappa (x2), -1+sigma (x2), -1-sigma (x2)}; above
// threshold one vanishes (orientation is free) and the rest have Re < 0.
std::vector<cplx> classical_stability_eigs(const SteadyState& s, double sigma, double kappa);

// Transverse mode functions (polar r, phi or Cartesian x, y).
double gauss_mode(double r, double w_p);                                   // pump G(r)
cplx laguerre_mode(int m, double x, double y, double w_s);                 // L_{+1} / L_{-1}
cplx hg10(double x, double y, double psi, double w_s);                     // H_10^psi
cplx hg01(double x, double y, double psi, double w_s);                     // H_01^psi

// L2 norm of a mode computed by trapezoid quadrature on [-half, half]^2, n x n grid.
// which: 0 = G (needs w = w_p), 1 = L_{+-1}, 2 = H_10^psi, 3 = H_01^psi.
double mode_norm_l2(int which, double w, double psi, double half_extent, int n);

// Signal pattern above threshold, A_s(x,y) = sqrt(2) rho H_10^theta(x,y).
cplx signal_pattern(double x, double y, double sigma, double theta, double w_s);

// Sample the pattern on an n x n Cartesian grid over [-half, half]^2 and write
// CSV rows "x,y,re,im,abs".  Returns the number of rows written.
long write_pattern_csv(const std::string& path, double sigma, double theta, double w_s,
                       double half_extent, int n);

}  // namespace opo
