#include "opo/params.hpp"

#include <cmath>

#include "opo/constants.hpp"

namespace opo {

using constants::c_light;
using constants::eps0;
using constants::hbar;
using constants::pi;

double DimensionlessParams::rho() const {
  if (sigma <= 1.0) throw std::domain_error("rho requires sigma > 1");
  return std::sqrt(sigma - 1.0);
}

double DimensionlessParams::D() const {
  if (sigma <= 1.0) throw std::domain_error("D requires sigma > 1");
  return d() / (sigma - 1.0);
}

double waist_radius(double lambda, double mirror_R, double cavity_L) {
  if (lambda <= 0 || cavity_L <= 0) throw std::domain_error("waist_radius: lambda, L must be > 0");
  const double q = 2.0 * mirror_R / cavity_L - 1.0;
  if (q <= 0) throw std::domain_error("waist_radius: needs 2R/L > 1 (stable near-planar cavity)");
  return std::sqrt(lambda * cavity_L / (2.0 * pi) * std::sqrt(q));
}

DerivedRates derive_rates(const PhysicalParams& p) {
  if (p.T_p <= 0 || p.T_s <= 0) throw std::domain_error("derive_rates: transmittivities must be > 0");
  if (p.n_index <= 0 || p.chi2 <= 0 || p.crystal_l <= 0)
    throw std::domain_error("derive_rates: crystal parameters must be > 0");
  DerivedRates r;
  r.w_p = waist_radius(p.lambda_p, p.mirror_R, p.cavity_L);
  r.w_s = std::sqrt(2.0) * r.w_p;
  r.gamma_p = c_light * p.T_p / (2.0 * p.cavity_L);
  r.gamma_s = c_light * p.T_s / (2.0 * p.cavity_L);
  r.chi = (3.0 * pi * p.chi2 * p.crystal_l / r.w_p) * std::sqrt(hbar / eps0) *
          std::pow(c_light / (p.n_index * p.cavity_L * p.lambda_p), 1.5);
  r.E_p = std::sqrt(p.n_index * p.lambda_p * r.gamma_p * p.P_laser / (2.0 * pi * hbar * c_light));
  r.E_th = r.gamma_p * r.gamma_s / r.chi;
  // E_p = E_th  <=>  P = P_th
  r.P_th = (r.E_th * r.E_th) * 2.0 * pi * hbar * c_light / (p.n_index * p.lambda_p * r.gamma_p);
  return r;
}

DimensionlessParams reduce(const PhysicalParams& p) {
  const DerivedRates r = derive_rates(p);
  DimensionlessParams q;
  q.sigma = r.E_p * r.chi / (r.gamma_p * r.gamma_s);
  q.kappa = r.gamma_p / r.gamma_s;
  q.g = r.chi / std::sqrt(r.gamma_p * r.gamma_s);
  return q;
}

DimensionlessParams dimensionless(double sigma, double kappa, double g) {
  if (sigma < 0 || kappa <= 0 || g < 0) throw std::domain_error("dimensionless: bad parameters");
  DimensionlessParams q;
  q.sigma = sigma;
  q.kappa = kappa;
  q.g = g;
  return q;
}

double sigma_from_power_ratio(double P_over_Pth) {
  if (P_over_Pth < 0) throw std::domain_error("sigma_from_power_ratio: ratio must be >= 0");
  // E_p scales as sqrt(P), sigma = E_p/E_th
  return std::sqrt(P_over_Pth);
}

}  // namespace opo
