#include "opo/analytics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "opo/constants.hpp"

namespace opo {

// ---------------------------------------------------------------------------
// Linear fluctuation matrices
// ---------------------------------------------------------------------------

Eigen::Matrix4d adiabatic_linear_matrix(double sigma) {
  const double s = sigma;
  Eigen::Matrix4d L;
  L << s, 0, s - 1, -1,
       0, s, -1, s - 1,
       s - 1, -1, s, 0,
       -1, s - 1, 0, s;
  return -L;
}

std::array<std::pair<double, Eigen::Vector4d>, 4> adiabatic_eigensystem(double sigma) {
  auto v = [](double a, double b, double c, double d) -> Eigen::Vector4d {
    return Eigen::Vector4d(a, b, c, d) * 0.5;
  };
  return {std::make_pair(0.0, v(1, -1, -1, 1)),
          std::make_pair(-2.0, v(1, 1, -1, -1)),
          std::make_pair(-2.0 * (sigma - 1.0), v(1, 1, 1, 1)),
          std::make_pair(-2.0 * sigma, v(1, -1, 1, -1))};
}

Eigen::Matrix<double, 6, 6> full_linear_matrix(double sigma, double kappa) {
  if (sigma <= 1.0) throw std::domain_error("full_linear_matrix: needs sigma > 1");
  const double r = std::sqrt(sigma - 1.0);
  Eigen::Matrix<double, 6, 6> L;
  L << -kappa, 0, -r, 0, -r, 0,
       0, -kappa, 0, -r, 0, -r,
       r, 0, -1, 0, 0, 1,
       0, r, 0, -1, 1, 0,
       r, 0, 0, 1, -1, 0,
       0, r, 1, 0, 0, -1;
  return L;
}

Eigen::Matrix<double, 6, 1> goldstone6() {
  Eigen::Matrix<double, 6, 1> w;
  w << 0, 0, 1, -1, -1, 1;
  return 0.5 * w;
}

Eigen::Matrix<double, 6, 1> damped6() {
  Eigen::Matrix<double, 6, 1> w;
  w << 0, 0, 1, 1, -1, -1;
  return 0.5 * w;
}

// ---------------------------------------------------------------------------
// Diffusion and spectra
// ---------------------------------------------------------------------------

double diffusion_D(double sigma, double g) {
  if (sigma <= 1.0) throw std::domain_error("diffusion_D: needs sigma > 1");
  return 0.25 * g * g / (sigma - 1.0);
}

double orientation_variance(double tau, double sigma, double g) {
  if (tau < 0) throw std::domain_error("orientation_variance: tau must be >= 0");
  return diffusion_D(sigma, g) * tau;
}

double v_out_xb(double sigma, double omega) {
  const double s1 = sigma - 1.0;
  return 1.0 + 1.0 / (s1 * s1 + 0.25 * omega * omega);
}

double v_out_yb(double sigma, double omega) {
  return 1.0 - 1.0 / (sigma * sigma + 0.25 * omega * omega);
}

double v_out_xd(double /*omega*/) { return 1.0; }

double v_out_yd(double omega) { return 1.0 - 1.0 / (1.0 + 0.25 * omega * omega); }

double v_out_xd_phi(double phi, double omega) {
  const double s = std::sin(phi);
  return 1.0 - s * s / (1.0 + 0.25 * omega * omega);
}

double proj_correlation(int m, double sigma, double g, double dtau) {
  const double a = std::abs(dtau);
  const double g24 = 0.25 * g * g;
  switch (m) {
    case 1: return -g24 * std::exp(-2.0 * a);
    case 2:
      if (sigma <= 1.0) throw std::domain_error("proj_correlation: m=2 needs sigma > 1");
      return g24 / (sigma - 1.0) * std::exp(-2.0 * (sigma - 1.0) * a);
    case 3: return g24 / sigma * std::exp(-2.0 * sigma * a);
    default: throw std::domain_error("proj_correlation: m must be 1, 2 or 3");
  }
}

double proj_spectrum(int m, double sigma, double g, double omega) {
  const double g2 = g * g;
  const double w2 = omega * omega;
  switch (m) {
    case 1: return -g2 / (4.0 + w2);
    case 2: {
      if (sigma <= 1.0) throw std::domain_error("proj_spectrum: m=2 needs sigma > 1");
      const double s1 = sigma - 1.0;
      return g2 / (4.0 * s1 * s1 + w2);
    }
    case 3: return g2 / (4.0 * sigma * sigma + w2);
    default: throw std::domain_error("proj_spectrum: m must be 1, 2 or 3");
  }
}

// Output variance from the damped-coordinate spectra: the fluctuation of the
// quadrature is sqrt(2) c_m (times i for the phase-type ones, which flips the
// sign of the non-conjugated product), so V = 1 +- (4/g^2) Ctilde_m.
double v_out_yd_composed(double sigma, double g, double omega) {
  return 1.0 + 4.0 / (g * g) * proj_spectrum(1, sigma, g, omega);
}

double v_out_xb_composed(double sigma, double g, double omega) {
  return 1.0 + 4.0 / (g * g) * proj_spectrum(2, sigma, g, omega);
}

double v_out_yb_composed(double sigma, double g, double omega) {
  return 1.0 - 4.0 / (g * g) * proj_spectrum(3, sigma, g, omega);
}

double wiener_sin_correlation(double D, double t1, double t2) {
  if (t1 < 0 || t2 < 0 || D < 0) throw std::domain_error("wiener_sin_correlation: bad arguments");
  return std::exp(-0.5 * D * (t1 + t2)) * std::sinh(D * std::min(t1, t2));
}

double wiener_cos_correlation(double D, double t1, double t2) {
  if (t1 < 0 || t2 < 0 || D < 0) throw std::domain_error("wiener_cos_correlation: bad arguments");
  return std::exp(-0.5 * D * (t1 + t2)) * std::cosh(D * std::min(t1, t2));
}

// ---------------------------------------------------------------------------
// Fixed local oscillator
// ---------------------------------------------------------------------------

double still_correlation(double sigma, double g, double phi, double t1, double t2) {
  const double D = diffusion_D(sigma, g);
  const double rho2 = sigma - 1.0;
  const double dt = t1 - t2;
  const double S = wiener_sin_correlation(D, t1, t2);
  const double C = wiener_cos_correlation(D, t1, t2);
  const double c = std::cos(phi), s = std::sin(phi);
  return 2.0 * c * c * S * (4.0 * rho2 + proj_correlation(2, sigma, g, dt)) +
         2.0 * s * s * (proj_correlation(1, sigma, g, dt) * C - proj_correlation(3, sigma, g, dt) * S);
}

double sinc(double x) {
  if (std::abs(x) < 1e-4) {
    const double x2 = x * x;
    return 1.0 - x2 / 6.0 * (1.0 - x2 / 20.0);
  }
  return std::sin(x) / x;
}

double fixed_lo_s0(double sigma, double d, double T, double omega) {
  if (sigma <= 1.0 || d <= 0 || T <= 0) throw std::domain_error("fixed_lo_s0: bad arguments");
  const double x = omega * T;
  double first;
  if (std::abs(x) < 1e-2) {
    // (8/w^2)(1 - sinc wT) = 8T^2 [1/6 - x^2/120 + x^4/5040 - ...]
    const double x2 = x * x;
    first = 8.0 * T * T * (1.0 / 6.0 - x2 / 120.0 * (1.0 - x2 / 42.0));
  } else {
    first = 8.0 / (omega * omega) * (1.0 - sinc(x));
  }
  const double s1 = sigma - 1.0;
  const double w2 = omega * omega;
  const double second =
      4.0 * d * T / (w2 * s1) * (6.0 * s1 * s1 + w2) / (4.0 * s1 * s1 + w2);
  return first - second;
}

double fixed_lo_s90(double sigma, double d, double T, double omega) {
  if (sigma <= 1.0 || d <= 0 || T <= 0) throw std::domain_error("fixed_lo_s90: bad arguments");
  const double w2 = omega * omega;
  const double q = 4.0 + w2;
  return (8.0 - 2.0 * w2) / (T * q * q) - 4.0 / q +
         8.0 * d * T * (sigma + 1.0) / (q * (4.0 * sigma * sigma + w2));
}

double fixed_lo_spectrum(double sigma, double d, double T, double omega, double phi) {
  const double c = std::cos(phi), s = std::sin(phi);
  const double c2 = c * c, s2 = s * s;
  double v = 1.0;
  if (c2 > 1e-24) v += c2 * fixed_lo_s0(sigma, d, T, omega);
  if (s2 > 1e-24) v += s2 * fixed_lo_s90(sigma, d, T, omega);
  return v;
}

namespace {

// Weights/abscissae of 16-point Gauss-Legendre on [-1, 1].
constexpr int kGL = 16;
constexpr double kGLx[kGL / 2] = {0.0950125098376374, 0.2816035507792589, 0.4580167776572274,
                                  0.6178762444026438, 0.7554044083550030, 0.8656312023878318,
                                  0.9445750230732326, 0.9894009349916499};
constexpr double kGLw[kGL / 2] = {0.1894506104550685, 0.1826034150449236, 0.1691565193950025,
                                  0.1495959888165767, 0.1246289712555339, 0.0951585116824928,
                                  0.0622535239386479, 0.0271524594117541};

double gl_integrate(const std::function<double(double)>& f, double a, double b, int panels) {
  const double h = (b - a) / panels;
  double acc = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double mid = a + (p + 0.5) * h;
    for (int i = 0; i < kGL / 2; ++i) {
      const double dx = 0.5 * h * kGLx[i];
      acc += kGLw[i] * (f(mid + dx) + f(mid - dx));
    }
  }
  return acc * 0.5 * h;
}

// int_0^M exp(-D m) cosh(D m) dm and the sinh analogue, cancellation-safe.
double window_ic(double D, double M) { return 0.5 * M - 0.25 * std::expm1(-2.0 * D * M) / D; }
double window_is(double D, double M) { return 0.5 * M + 0.25 * std::expm1(-2.0 * D * M) / D; }

}  // namespace

// Exact reduction of the double window integral: writing the two-time kernel as
// f(|t1-t2|) g(min) exp(-D(t1+t2)/2) and integrating out the min coordinate,
//   V = 1 + (2/T) int_0^T dD cos(wD) e^{-D D/2} [kernel pieces] with
//   cos^2 phi:  4 (rho^2/d + e^{-2 rho^2 D}/(4 rho^2)) Is(T-D)
//   sin^2 phi:  -(e^{-2D} Ic(T-D) + e^{-2 sigma D} Is(T-D)/sigma)
double fixed_lo_spectrum_exact(double sigma, double d, double T, double omega, double phi) {
  if (sigma <= 1.0 || d <= 0 || T <= 0) throw std::domain_error("fixed_lo_spectrum_exact: bad arguments");
  const double rho2 = sigma - 1.0;
  const double D = d / rho2;
  const double c = std::cos(phi), s = std::sin(phi);
  const double c2 = c * c, s2 = s * s;

  auto integrand = [&](double x) {
    const double M = T - x;
    const double Is = window_is(D, M);
    double val = 0.0;
    if (c2 > 1e-24)
      val += c2 * 4.0 * (rho2 / d + std::exp(-2.0 * rho2 * x) / (4.0 * rho2)) * Is;
    if (s2 > 1e-24)
      val -= s2 * (std::exp(-2.0 * x) * window_ic(D, M) + std::exp(-2.0 * sigma * x) * Is / sigma);
    return std::cos(omega * x) * std::exp(-0.5 * D * x) * val;
  };

  // Two scales: the damped-coordinate factors die off within a few units of
  // lag while the diffusion envelope stretches over all of [0, T].  Integrate
  // the head finely, the tail with panels sized by the cos(w x) oscillation.
  auto osc_panels = [&](double len) {
    double p = 64.0 + std::ceil(4.0 * std::abs(omega) * len / constants::pi);
    return static_cast<int>(std::min(p, 400000.0));
  };
  const double head = std::min(T, 30.0);
  double acc = gl_integrate(integrand, 0.0, head, osc_panels(head));
  if (T > head) acc += gl_integrate(integrand, head, T, osc_panels(T - head));
  return 1.0 + 2.0 / T * acc;
}

double optimal_detection_time(double sigma, double d) {
  if (sigma <= 1.0 || d <= 0) throw std::domain_error("optimal_detection_time: bad arguments");
  return sigma / std::sqrt(d * (sigma + 1.0));
}

std::pair<double, double> golden_min(const std::function<double(double)>& f, double a, double b,
                                     double tol) {
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double lo = a, hi = b;
  double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
  double f1 = f(x1), f2 = f(x2);
  while (hi - lo > tol) {
    if (f1 < f2) {
      hi = x2; x2 = x1; f2 = f1;
      x1 = hi - gr * (hi - lo); f1 = f(x1);
    } else {
      lo = x1; x1 = x2; f1 = f2;
      x2 = lo + gr * (hi - lo); f2 = f(x2);
    }
  }
  double xm = 0.5 * (lo + hi), fm = f(xm);
  // boundary minima are genuine answers here (e.g. the frequency argmin at 0),
  // but a non-finite boundary value (outside a closed form's validity) is not
  const double fa = f(a), fb = f(b);
  if (std::isfinite(fa) && fa <= fm && fa <= fb) return {a, fa};
  if (std::isfinite(fb) && fb <= fm) return {b, fb};
  return {xm, fm};
}

double optimal_frequency(double sigma, double d, double T, double phi, double lo, double hi,
                         double tol) {
  auto f = [&](double w) { return fixed_lo_spectrum(sigma, d, T, w, phi); };
  return golden_min(f, lo, hi, tol).first;
}

double to_decibels(double v) {
  return 10.0 * std::log10(std::max(v, 1e-300));
}

// ---------------------------------------------------------------------------
// Poisson brackets
// ---------------------------------------------------------------------------

double poisson_bracket1(const Field1& f, const Field1& h, cplx b, double eps) {
  auto dx = [&](const Field1& F) { return (F(b + eps) - F(b - eps)) / (2 * eps); };
  auto dy = [&](const Field1& F) {
    return (F(b + cplx(0, eps)) - F(b - cplx(0, eps))) / (2 * eps);
  };
  return 0.5 * (dx(f) * dy(h) - dy(f) * dx(h));
}

double poisson_bracket2(const Field2& f, const Field2& h, cplx bp, cplx bm, double eps) {
  auto grad = [&](const Field2& F, std::array<double, 4>& g) {
    g[0] = (F(bp + eps, bm) - F(bp - eps, bm)) / (2 * eps);
    g[1] = (F(bp + cplx(0, eps), bm) - F(bp - cplx(0, eps), bm)) / (2 * eps);
    g[2] = (F(bp, bm + eps) - F(bp, bm - eps)) / (2 * eps);
    g[3] = (F(bp, bm + cplx(0, eps)) - F(bp, bm - cplx(0, eps))) / (2 * eps);
  };
  std::array<double, 4> gf{}, gh{};
  grad(f, gf);
  grad(h, gh);
  return 0.5 * ((gf[0] * gh[1] - gf[1] * gh[0]) + (gf[2] * gh[3] - gf[3] * gh[2]));
}

double orientation_angle(cplx bp, cplx bm) { return 0.5 * std::arg(std::conj(bp) * bm); }

double xd_quadrature(cplx bp, cplx bm, double phi) {
  const double th = orientation_angle(bp, bm);
  const cplx z = cplx(0.0, 1.0) / std::sqrt(2.0) * std::exp(cplx(0.0, -phi)) *
                 (std::exp(cplx(0.0, th)) * bp - std::exp(cplx(0.0, -th)) * bm);
  return 2.0 * z.real();
}

double bracket_xx_closed(double Rp, double Rm) {
  return -(Rp - Rm) * (Rp - Rm) / (2.0 * Rp * Rm);
}

double bracket_xtheta_closed(double Rp, double Rm, double Phi, double phi) {
  return std::sqrt(2.0) * (Rp + Rm) / (4.0 * Rp * Rm) * std::sin(Phi - phi);
}

}  // namespace opo
