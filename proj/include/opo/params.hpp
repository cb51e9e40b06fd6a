#pragma once

#include <stdexcept>

namespace opo {

// Physical description of the cavity + crystal + pump laser.  Units are SI.
struct PhysicalParams {
  double lambda_p = 400e-9;  // pump wavelength [m]; signal is at 2*lambda_p
  double mirror_R = 1.0;     // mirror curvature radius [m]
  double cavity_L = 0.1;     // cavity length [m]
  double crystal_l = 1e-3;   // crystal length [m]
  double T_p = 0.1;          // pump mirror transmittivity
  double T_s = 0.01;         // signal mirror transmittivity
  double n_index = 2.5;      // refractive index at the cavity resonances
  double chi2 = 2e-12;       // effective second-order susceptibility [m/V]
  double P_laser = 0.0;      // injected pump power [W]
};

// Quantities derived from PhysicalParams.
struct DerivedRates {
  double w_p = 0;      // pump waist [m]
  double w_s = 0;      // signal waist [m], w_s = sqrt(2) w_p
  double gamma_p = 0;  // pump cavity decay rate [1/s]
  double gamma_s = 0;  // signal cavity decay rate [1/s]
  double chi = 0;      // nonlinear coupling [1/s]
  double E_p = 0;      // pump injection amplitude [sqrt(photons)/s]
  double E_th = 0;     // threshold injection amplitude gamma_p*gamma_s/chi
  double P_th = 0;     // threshold laser power [W]
};

// The three dimensionless numbers that fix the rescaled model.
struct DimensionlessParams {
  double sigma = 0;  // pump strength relative to threshold
  double kappa = 0;  // gamma_p / gamma_s
  double g = 0;      // noise strength chi / sqrt(gamma_p gamma_s)

  double d() const { return 0.25 * g * g; }
  double rho() const;  // above-threshold signal amplitude sqrt(sigma - 1)
  double D() const;    // phase diffusion constant d / (sigma - 1)
};

// Waist of the cavity mode at wavelength lambda: w^2 = (lambda L / 2 pi) sqrt(2R/L - 1).
double waist_radius(double lambda, double mirror_R, double cavity_L);

DerivedRates derive_rates(const PhysicalParams& p);

// Full pipeline physical -> dimensionless.
DimensionlessParams reduce(const PhysicalParams& p);

// Direct construction in dimensionless terms (the common entry point for runs).
DimensionlessParams dimensionless(double sigma, double kappa, double g);

// sigma expressed as a multiple of the threshold pump power.
double sigma_from_power_ratio(double P_over_Pth);

}  // namespace opo
