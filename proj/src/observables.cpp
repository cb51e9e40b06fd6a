#include "opo/observables.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <stdexcept>

namespace opo {

namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

}  // namespace

LagCorrelator::LagCorrelator(std::size_t n_samples, std::size_t max_lag)
    : m_(n_samples), k_(max_lag) {
  if (k_ >= m_) throw std::invalid_argument("LagCorrelator: max_lag must be < n_samples");
  nfft_ = next_pow2(m_ + k_ + 1);
  a_ = reinterpret_cast<cplx*>(fftw_alloc_complex(nfft_));
  b_ = reinterpret_cast<cplx*>(fftw_alloc_complex(nfft_));
  std::lock_guard<std::mutex> lock(planner_mutex());
  plan_fwd_ = fftw_plan_dft_1d(static_cast<int>(nfft_), reinterpret_cast<fftw_complex*>(a_),
                               reinterpret_cast<fftw_complex*>(b_), FFTW_FORWARD, FFTW_ESTIMATE);
  plan_inv_ = fftw_plan_dft_1d(static_cast<int>(nfft_), reinterpret_cast<fftw_complex*>(a_),
                               reinterpret_cast<fftw_complex*>(b_), FFTW_BACKWARD, FFTW_ESTIMATE);
}

LagCorrelator::~LagCorrelator() {
  std::lock_guard<std::mutex> lock(planner_mutex());
  fftw_destroy_plan(static_cast<fftw_plan>(plan_fwd_));
  fftw_destroy_plan(static_cast<fftw_plan>(plan_inv_));
  fftw_free(a_);
  fftw_free(b_);
}

void LagCorrelator::lag_sums(const std::vector<cplx>& x, std::vector<cplx>& out) {
  if (x.size() != m_) throw std::invalid_argument("LagCorrelator: series length mismatch");
  for (std::size_t i = 0; i < m_; ++i) a_[i] = x[i];
  for (std::size_t i = m_; i < nfft_; ++i) a_[i] = 0.0;
  fftw_execute_dft(static_cast<fftw_plan>(plan_fwd_), reinterpret_cast<fftw_complex*>(a_),
                   reinterpret_cast<fftw_complex*>(b_));
  // G(j) G(-j) -> inverse transform gives sum_t x_t x_{t-k}; padding >= M+K+1
  // keeps the circular wrap out of the k = 0..K window.
  a_[0] = b_[0] * b_[0];
  for (std::size_t j = 1; j < nfft_; ++j) a_[j] = b_[j] * b_[nfft_ - j];
  fftw_execute_dft(static_cast<fftw_plan>(plan_inv_), reinterpret_cast<fftw_complex*>(a_),
                   reinterpret_cast<fftw_complex*>(b_));
  out.resize(k_ + 1);
  const double norm = 1.0 / static_cast<double>(nfft_);
  for (std::size_t k = 0; k <= k_; ++k) out[k] = b_[k] * norm;
}

std::pair<cplx, cplx> windowed_pair(const std::vector<cplx>& x, std::size_t n_win, double dtau,
                                    double omega) {
  if (n_win > x.size()) throw std::invalid_argument("windowed_pair: window exceeds series");
  const cplx rot = std::exp(cplx(0.0, omega * dtau));
  cplx phase = 1.0;
  cplx fp = 0.0, fm = 0.0;
  for (std::size_t n = 0; n < n_win; ++n) {
    fp += x[n] * phase;
    fm += x[n] * std::conj(phase);
    phase *= rot;
  }
  return {fp * dtau, fm * dtau};
}

LinearFit fit_linear(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("fit_linear: bad input");
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
    syy += y[i] * y[i];
  }
  const double vxx = sxx - sx * sx / n;
  const double vxy = sxy - sx * sy / n;
  const double vyy = syy - sy * sy / n;
  LinearFit f;
  f.slope = vxy / vxx;
  f.intercept = (sy - f.slope * sx) / n;
  f.r2 = (vyy > 0) ? (vxy * vxy) / (vxx * vyy) : 1.0;
  return f;
}

SaturableFit fit_saturable(const std::vector<double>& omega, const std::vector<double>& v,
                           double a0, double b0) {
  if (omega.size() != v.size() || omega.size() < 3)
    throw std::invalid_argument("fit_saturable: bad input");
  const std::size_t n = omega.size();
  std::vector<double> u(n);
  for (std::size_t i = 0; i < n; ++i) u[i] = 0.25 * omega[i] * omega[i];

  double a = a0, b = b0, lambda = 1e-3;
  auto chi2 = [&](double aa, double bb) {
    double s = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const double r = v[i] - aa * u[i] / (bb + aa * u[i]);
      s += r * r;
    }
    return s;
  };
  double cur = chi2(a, b);
  SaturableFit fit;
  for (fit.iters = 0; fit.iters < 200; ++fit.iters) {
    double jtj00 = 0, jtj01 = 0, jtj11 = 0, jtr0 = 0, jtr1 = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const double den = b + a * u[i];
      const double f = a * u[i] / den;
      const double ja = u[i] * b / (den * den);
      const double jb = -a * u[i] / (den * den);
      const double r = v[i] - f;
      jtj00 += ja * ja;
      jtj01 += ja * jb;
      jtj11 += jb * jb;
      jtr0 += ja * r;
      jtr1 += jb * r;
    }
    const double d00 = jtj00 * (1 + lambda), d11 = jtj11 * (1 + lambda);
    const double det = d00 * d11 - jtj01 * jtj01;
    if (std::abs(det) < 1e-300) break;
    const double da = (d11 * jtr0 - jtj01 * jtr1) / det;
    const double db = (d00 * jtr1 - jtj01 * jtr0) / det;
    const double trial = chi2(a + da, b + db);
    if (trial < cur) {
      a += da;
      b += db;
      lambda = std::max(lambda * 0.3, 1e-12);
      const bool small = std::abs(da) < 1e-12 * (1 + std::abs(a)) &&
                         std::abs(db) < 1e-12 * (1 + std::abs(b));
      cur = trial;
      if (small) {
        fit.converged = true;
        break;
      }
    } else {
      lambda *= 10;
      if (lambda > 1e12) {
        fit.converged = true;  // stuck at a (possibly flat) minimum
        break;
      }
    }
  }
  fit.a = a;
  fit.b = b;
  fit.rms = std::sqrt(cur / static_cast<double>(n));
  return fit;
}

double jackknife_sigma(const std::vector<double>& leave_out) {
  const std::size_t nb = leave_out.size();
  if (nb < 2) return 0.0;
  double mean = 0;
  for (double v : leave_out) mean += v;
  mean /= static_cast<double>(nb);
  double ss = 0;
  for (double v : leave_out) ss += (v - mean) * (v - mean);
  return std::sqrt(ss * (static_cast<double>(nb) - 1.0) / static_cast<double>(nb));
}

}  // namespace opo
