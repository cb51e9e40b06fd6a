#include "opo/classical.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "opo/constants.hpp"

namespace opo {

using constants::pi;

SteadyState classical_steady_state(double sigma, double theta) {
  if (sigma < 0) throw std::domain_error("classical_steady_state: sigma must be >= 0");
  SteadyState s;
  if (sigma <= 1.0) {
    s.b0 = sigma;
    s.bp = 0.0;
    s.bm = 0.0;
  } else {
    const double rho = std::sqrt(sigma - 1.0);
    s.b0 = 1.0;
    s.bp = rho * std::exp(cplx(0.0, -theta));
    s.bm = rho * std::exp(cplx(0.0, +theta));
  }
  return s;
}

std::array<cplx, 3> classical_residual(const SteadyState& s, double sigma) {
  return {s.b0 - sigma + s.bp * s.bm,
          s.bp - s.b0 * std::conj(s.bm),
          s.bm - s.b0 * std::conj(s.bp)};
}

namespace {

// Real 2x2 block of the Jacobian for a complex equation dz/dt = F:
// contribution of dF/d(beta_j) = a and dF/d(conj beta_j) = b.
void put_block(Eigen::Matrix<double, 6, 6>& J, int row, int col, cplx a, cplx b) {
  J(2 * row, 2 * col) += a.real() + b.real();
  J(2 * row, 2 * col + 1) += -a.imag() + b.imag();
  J(2 * row + 1, 2 * col) += a.imag() + b.imag();
  J(2 * row + 1, 2 * col + 1) += a.real() - b.real();
}

}  // namespace

cplx signal_pattern(double x, double y, double sigma, double theta, double w_s) {
  if (sigma <= 1.0) return 0.0;
  return std::sqrt(2.0 * (sigma - 1.0)) * hg10(x, y, theta, w_s);
}

// Stability of the mean-field equations
//   d beta_0 /dt = kappa (sigma - beta_0 - beta_+ beta_-)
//   d beta_+ /dt = -beta_+ + beta_0 conj(beta_-)
//   d beta_- /dt = -beta_- + beta_0 conj(beta_+)
// Below threshold, about (sigma, 0, 0): the pump fluctuation decouples with
// eigenvalue -kappa (twice, Re and Im).  For the signal pair, with u = d beta_+
// and v = conj(d beta_-): du/dt = -u + sigma v, dv/dt = -v + sigma u, giving
// eigenvalues -1 +- sigma, each doubled by the conjugate pair.  All six are
// negative exactly when sigma < 1.  Above threshold one eigenvalue vanishes
// (free pattern orientation) and the remaining five have Re < 0.
std::vector<cplx> classical_stability_eigs(const SteadyState& s, double sigma, double kappa) {
  (void)sigma;
  Eigen::Matrix<double, 6, 6> J = Eigen::Matrix<double, 6, 6>::Zero();
  // row 0: F0 = kappa (sigma - b0 - bp bm)
  put_block(J, 0, 0, -kappa, 0.0);
  put_block(J, 0, 1, -kappa * s.bm, 0.0);
  put_block(J, 0, 2, -kappa * s.bp, 0.0);
  // row 1: Fp = -bp + b0 conj(bm)
  put_block(J, 1, 1, -1.0, 0.0);
  put_block(J, 1, 0, std::conj(s.bm), 0.0);
  put_block(J, 1, 2, 0.0, s.b0);
  // row 2: Fm = -bm + b0 conj(bp)
  put_block(J, 2, 2, -1.0, 0.0);
  put_block(J, 2, 0, std::conj(s.bp), 0.0);
  put_block(J, 2, 1, 0.0, s.b0);

  Eigen::EigenSolver<Eigen::Matrix<double, 6, 6>> es(J);
  std::vector<cplx> out(6);
  for (int i = 0; i < 6; ++i) out[i] = es.eigenvalues()(i);
  return out;
}

double gauss_mode(double r, double w_p) {
  return std::sqrt(2.0 / pi) / w_p * std::exp(-r * r / (w_p * w_p));
}

cplx laguerre_mode(int m, double x, double y, double w_s) {
  if (m != 1 && m != -1) throw std::domain_error("laguerre_mode: m must be +1 or -1");
  const double r2 = x * x + y * y;
  const double pref = 2.0 / std::sqrt(pi) / (w_s * w_s) * std::exp(-r2 / (w_s * w_s));
  // r e^{+- i phi} = x +- i y
  return pref * cplx(x, m * y);
}

cplx hg10(double x, double y, double psi, double w_s) {
  const cplx ep = std::exp(cplx(0.0, -psi)) * laguerre_mode(+1, x, y, w_s);
  const cplx em = std::exp(cplx(0.0, +psi)) * laguerre_mode(-1, x, y, w_s);
  return (ep + em) / std::sqrt(2.0);
}

cplx hg01(double x, double y, double psi, double w_s) {
  const cplx ep = std::exp(cplx(0.0, -psi)) * laguerre_mode(+1, x, y, w_s);
  const cplx em = std::exp(cplx(0.0, +psi)) * laguerre_mode(-1, x, y, w_s);
  return (ep - em) / (std::sqrt(2.0) * cplx(0.0, 1.0));
}

double mode_norm_l2(int which, double w, double psi, double half_extent, int n) {
  if (n < 2) throw std::domain_error("mode_norm_l2: n must be >= 2");
  const double h = 2.0 * half_extent / (n - 1);
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = -half_extent + i * h;
    const double wx = (i == 0 || i == n - 1) ? 0.5 : 1.0;
    for (int j = 0; j < n; ++j) {
      const double y = -half_extent + j * h;
      const double wy = (j == 0 || j == n - 1) ? 0.5 : 1.0;
      double a2;
      switch (which) {
        case 0: a2 = std::norm(gauss_mode(std::sqrt(x * x + y * y), w)); break;
        case 1: a2 = std::norm(laguerre_mode(+1, x, y, w)); break;
        case 2: a2 = std::norm(hg10(x, y, psi, w)); break;
        case 3: a2 = std::norm(hg01(x, y, psi, w)); break;
        default: throw std::domain_error("mode_norm_l2: which must be 0..3");
      }
      acc += wx * wy * a2;
    }
  }
  return std::sqrt(acc * h * h);
}

long write_pattern_csv(const std::string& path, double sigma, double theta, double w_s,
                       double half_extent, int n) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw std::runtime_error("write_pattern_csv: cannot open " + path);
  std::fprintf(f, "x,y,re,im,abs\n");
  const double h = 2.0 * half_extent / (n - 1);
  long rows = 0;
  for (int i = 0; i < n; ++i) {
    const double x = -half_extent + i * h;
    for (int j = 0; j < n; ++j) {
      const double y = -half_extent + j * h;
      const cplx a = signal_pattern(x, y, sigma, theta, w_s);
      std::fprintf(f, "%.17g,%.17g,%.17g,%.17g,%.17g\n", x, y, a.real(), a.imag(), std::abs(a));
      ++rows;
    }
  }
  std::fclose(f);
  return rows;
}

}  // namespace opo
