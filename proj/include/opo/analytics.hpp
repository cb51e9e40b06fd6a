#pragma once

#include <Eigen/Dense>
#include <array>
#include <complex>
#include <functional>
#include <utility>
#include <vector>

namespace opo {

using cplx = std::complex<double>;

// ---------------------------------------------------------------------------
// Linearized fluctuation dynamics (adiabatic signal sector)
// ---------------------------------------------------------------------------

// 4x4 drift matrix of the linearized signal fluctuations b = (b+1, b+1^+, b-1, b-1^+)
// in the co-rotating pattern frame.
Eigen::Matrix4d adiabatic_linear_matrix(double sigma);

// Its exact eigensystem: pairs (lambda_j, w_j), j = 0..3, with
//   lambda = 0, -2, -2(sigma-1), -2 sigma
//   w0 = (1,-1,-1,1)/2, w1 = (1,1,-1,-1)/2, w2 = (1,1,1,1)/2, w3 = (1,-1,1,-1)/2.
// w0 is the orientation (Goldstone) direction; w1..w3 are the damped modes.
std::array<std::pair<double, Eigen::Vector4d>, 4> adiabatic_eigensystem(double sigma);

// 6x6 drift matrix of the fluctuations b = (b0, b0^+, b+1, b+1^+, b-1, b-1^+)
// without adiabatic elimination of the pump.
Eigen::Matrix<double, 6, 6> full_linear_matrix(double sigma, double kappa);

// Goldstone and first damped direction embedded in the 6-dimensional space:
// w0' = (0,0,1,-1,-1,1)/2 (eigenvalue 0) and w1' = (0,0,1,1,-1,-1)/2 (eigenvalue -2).
Eigen::Matrix<double, 6, 1> goldstone6();
Eigen::Matrix<double, 6, 1> damped6();

// ---------------------------------------------------------------------------
// Orientation diffusion
// ---------------------------------------------------------------------------

double diffusion_D(double sigma, double g);                    // (g^2/4)/(sigma-1)
double orientation_variance(double tau, double sigma, double g);  // D * tau

// ---------------------------------------------------------------------------
// Stationary rotating-frame squeezing spectra (noise spectral variances of the
// output quadratures; 1 = vacuum, 0 = perfect squeezing)
// ---------------------------------------------------------------------------

double v_out_xb(double sigma, double omega);   // bright amplitude: 1 + 1/((s-1)^2 + w^2/4)
double v_out_yb(double sigma, double omega);   // bright phase:     1 - 1/(s^2 + w^2/4)
double v_out_xd(double omega);                 // dark amplitude: exactly 1
double v_out_yd(double omega);                 // dark phase:       1 - 1/(1 + w^2/4)
double v_out_xd_phi(double phi, double omega); // dark, LO angle phi: 1 - sin^2(phi)/(1+w^2/4)

// Stationary correlations and spectra of the damped collective coordinates
// c_m(tau), m = 1, 2, 3.  Note <c1 c1> is negative (c1 has imaginary noise).
double proj_correlation(int m, double sigma, double g, double dtau);
double proj_spectrum(int m, double sigma, double g, double omega);

// Spectra recomposed from the projection correlators through the input-output
// relation; equal to the closed forms above.
double v_out_yd_composed(double sigma, double g, double omega);
double v_out_xb_composed(double sigma, double g, double omega);
double v_out_yb_composed(double sigma, double g, double omega);

// ---------------------------------------------------------------------------
// Orientation (Wiener) trigonometric correlations from theta(0) = 0
// ---------------------------------------------------------------------------

double wiener_sin_correlation(double D, double t1, double t2);  // <sin th1 sin th2>
double wiener_cos_correlation(double D, double t1, double t2);  // <cos th1 cos th2>

// ---------------------------------------------------------------------------
// Fixed (non-tracking) local oscillator homodyne theory
// ---------------------------------------------------------------------------

// Two-time correlation of the fixed-frame quadrature X_01^phi in the linearized
// + diffusing-orientation model (stationary damped coordinates).
double still_correlation(double sigma, double g, double phi, double t1, double t2);

// Closed small-d forms of the windowed spectral components at LO angle phi = 0
// and phi = pi/2 (detection window T, analysis frequency omega):
//   s0:  (8/w^2)(1 - sinc wT) - (4dT/(w^2(s-1))) (6(s-1)^2 + w^2)/(4(s-1)^2 + w^2)
//   s90: (8 - 2w^2)/(T(4+w^2)^2) - 4/(4+w^2) + 8dT(s+1)/((4+w^2)(4s^2+w^2))
// Validity: d T << 1.  s0 additionally requires w^2 >> 6dT/(s-1) / T^2-scale
// (its 1/w^2 pieces are expansion artifacts near w = 0; use the exact windowed
// evaluator there).  At w = 0 the first term of s0 is evaluated by its series
// limit 4T^2/3 and the d-term diverges to -inf as printed.
double fixed_lo_s0(double sigma, double d, double T, double omega);
double fixed_lo_s90(double sigma, double d, double T, double omega);

// Windowed output variance V = 1 + cos^2(phi) s0 + sin^2(phi) s90.
// A factor whose angular weight is below 1e-24 is skipped entirely, so exactly
// perpendicular/parallel LO settings never touch the other component.
double fixed_lo_spectrum(double sigma, double d, double T, double omega, double phi);

// Same quantity evaluated from the exact windowed double integral of
// still_correlation (reduced to one dimension; no small-d expansion).
double fixed_lo_spectrum_exact(double sigma, double d, double T, double omega, double phi);

// Detection window minimizing V at phi = pi/2, w = 0: T* = s / sqrt(d (s+1)),
// where also V(T*) = 1/T* exactly in the small-d theory.
double optimal_detection_time(double sigma, double d);

// Golden-section argmin of fixed_lo_spectrum over omega in [lo, hi].
double optimal_frequency(double sigma, double d, double T, double phi, double lo = 0.0,
                         double hi = 10.0, double tol = 1e-6);

double to_decibels(double v);  // 10 log10(v), clamped below at 1e-300

// ---------------------------------------------------------------------------
// Classical Poisson brackets over the signal modes
// ---------------------------------------------------------------------------

// Generic bracket {f,h} = (1/2) sum_m (df/dx_m dh/dy_m - df/dy_m dh/dx_m) with
// beta_m = x_m + i y_m, evaluated by central finite differences (step eps).
using Field1 = std::function<double(cplx)>;
using Field2 = std::function<double(cplx, cplx)>;
double poisson_bracket1(const Field1& f, const Field1& h, cplx b, double eps = 1e-6);
double poisson_bracket2(const Field2& f, const Field2& h, cplx bp, cplx bm, double eps = 1e-6);

// Pattern orientation and dark-mode quadrature as functions of the two signal
// amplitudes (classical fields, beta^+ = conj(beta)).
double orientation_angle(cplx bp, cplx bm);          // (1/2) arg(conj(b+) b-)
double xd_quadrature(cplx bp, cplx bm, double phi);  // X_d^phi

// Closed forms of the two composite brackets, in terms of the moduli R+ = |b+1|,
// R- = |b-1| and the mean phase Phi = (arg b+1 + arg b-1)/2:
//   {X^phi, X^{phi+pi/2}} = -(R+ - R-)^2 / (2 R+ R-)
//   {X^phi, theta}        = sqrt(2) (R+ + R-) sin(Phi - phi) / (4 R+ R-)
// Both reduce at equal moduli R = rho, Phi = 0 to 0 and -sin(phi)/(sqrt(2) rho).
double bracket_xx_closed(double Rp, double Rm);
double bracket_xtheta_closed(double Rp, double Rm, double Phi, double phi);

// ---------------------------------------------------------------------------
// Small numeric helpers shared across modules
// ---------------------------------------------------------------------------

double sinc(double x);  // sin(x)/x, sinc(0) = 1

// Golden-section minimum of f on [a, b]; returns (argmin, min).  Endpoints are
// compared against the interior result, so boundary minima are reported exactly.
std::pair<double, double> golden_min(const std::function<double(double)>& f, double a, double b,
                                     double tol);

}  // namespace opo
