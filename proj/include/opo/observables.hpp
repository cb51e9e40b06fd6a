#pragma once

#include <complex>
#include <cstddef>
#include <utility>
#include <vector>

namespace opo {

using cplx = std::complex<double>;

// Non-conjugated lag sums out[k] = sum_n x[n] x[n+k] for k = 0..K, computed by
// zero-padded FFT.  The positive-P quadrature estimators need the plain
// product (the doubled variables are not conjugates of each other), which is
// why there is no complex conjugation anywhere in this pipeline.
// One instance per worker thread; construction is serialized internally
// (the FFTW planner is not thread-safe), execution is concurrent.
class LagCorrelator {
 public:
  LagCorrelator(std::size_t n_samples, std::size_t max_lag);
  ~LagCorrelator();
  LagCorrelator(const LagCorrelator&) = delete;
  LagCorrelator& operator=(const LagCorrelator&) = delete;

  // x.size() must equal n_samples; out is resized to max_lag + 1.
  void lag_sums(const std::vector<cplx>& x, std::vector<cplx>& out);

  std::size_t n_samples() const { return m_; }
  std::size_t max_lag() const { return k_; }

 private:
  std::size_t m_, k_, nfft_;
  void* plan_fwd_ = nullptr;
  void* plan_inv_ = nullptr;
  cplx* a_ = nullptr;  // in/out buffers (fftw-aligned)
  cplx* b_ = nullptr;
};

// Windowed Fourier pair F(+-w) = sum_n x[n] e^{+- i w n dtau} dtau over the
// first n_win samples.
std::pair<cplx, cplx> windowed_pair(const std::vector<cplx>& x, std::size_t n_win, double dtau,
                                    double omega);

// Ordinary least squares y = slope x + intercept.
struct LinearFit {
  double slope = 0, intercept = 0, r2 = 0;
};
LinearFit fit_linear(const std::vector<double>& x, const std::vector<double>& y);

// Levenberg-Marquardt fit of v(w) = a u / (b + a u), u = (w/2)^2.
struct SaturableFit {
  double a = 0, b = 0;
  double rms = 0;
  int iters = 0;
  bool converged = false;
};
SaturableFit fit_saturable(const std::vector<double>& omega, const std::vector<double>& v,
                           double a0 = 1.0, double b0 = 1.0);

// Standard error from delete-one leave-out estimates.
double jackknife_sigma(const std::vector<double>& leave_out);

}  // namespace opo
