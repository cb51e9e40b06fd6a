#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "opo/observables.hpp"
#include "opo/rng.hpp"

using namespace opo;

namespace {
std::vector<cplx> random_series(std::size_t n, std::uint64_t idx) {
  TrajectoryRng rng(909, idx);
  std::vector<cplx> x(n);
  for (auto& c : x) c = cplx(rng.normal(), rng.normal());
  return x;
}
}  // namespace

TEST_CASE("lag sums match the direct quadratic loop") {
  const std::size_t M = 64, K = 10;
  LagCorrelator corr(M, K);
  CHECK(corr.n_samples() == M);
  CHECK(corr.max_lag() == K);
  std::vector<cplx> out;
  for (std::uint64_t rep = 0; rep < 2; ++rep) {  // plan reuse
    const auto x = random_series(M, rep);
    corr.lag_sums(x, out);
    REQUIRE(out.size() == K + 1);
    for (std::size_t k = 0; k <= K; ++k) {
      cplx want = 0.0;
      for (std::size_t n = 0; n + k < M; ++n) want += x[n] * x[n + k];  // no conjugation
      CHECK(std::abs(out[k] - want) <= 1e-10);
    }
  }
  std::vector<cplx> bad(M - 1);
  CHECK_THROWS_AS(corr.lag_sums(bad, out), std::invalid_argument);
  CHECK_THROWS_AS(LagCorrelator(8, 8), std::invalid_argument);
}

TEST_CASE("windowed fourier pair") {
  const auto x = random_series(32, 4);
  const std::size_t nwin = 20;
  const double dtau = 0.05, omega = 2.3;
  const auto [fp, fm] = windowed_pair(x, nwin, dtau, omega);
  cplx wp = 0.0, wm = 0.0;
  for (std::size_t n = 0; n < nwin; ++n) {
    wp += x[n] * std::exp(cplx(0.0, omega * n * dtau)) * dtau;
    wm += x[n] * std::exp(cplx(0.0, -omega * n * dtau)) * dtau;
  }
  CHECK(std::abs(fp - wp) <= 1e-13);
  CHECK(std::abs(fm - wm) <= 1e-13);
  CHECK_THROWS_AS(windowed_pair(x, 64, dtau, omega), std::invalid_argument);
}

TEST_CASE("least squares line") {
  std::vector<double> xs, ys;
  for (int i = 0; i < 12; ++i) {
    xs.push_back(0.3 * i);
    ys.push_back(3.0 * 0.3 * i - 2.0);
  }
  const LinearFit f = fit_linear(xs, ys);
  CHECK(f.slope == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(f.intercept == doctest::Approx(-2.0).epsilon(1e-12));
  CHECK(f.r2 == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(fit_linear({1.0}, {2.0}), std::invalid_argument);
}

TEST_CASE("saturable fit recovers the identified ratio") {
  // v = a u / (b + a u) is invariant under (a,b) -> (c a, c b): only b/a is
  // meaningful, and the fit stays near its start along the flat direction.
  std::vector<double> omega, v;
  const double a = 0.9, b = 1.2;
  for (int i = 1; i <= 40; ++i) {
    const double w = 0.5 * i;
    const double u = 0.25 * w * w;
    omega.push_back(w);
    v.push_back(a * u / (b + a * u));
  }
  const SaturableFit f = fit_saturable(omega, v);
  CHECK(f.converged);
  CHECK(f.rms <= 1e-10);
  CHECK(f.b / f.a == doctest::Approx(b / a).epsilon(1e-7));

  // data generated at the start point: the fit should not wander
  std::vector<double> v1;
  for (double w : omega) {
    const double u = 0.25 * w * w;
    v1.push_back(u / (1.0 + u));
  }
  const SaturableFit f1 = fit_saturable(omega, v1);
  CHECK(f1.converged);
  CHECK(f1.a == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(f1.b == doctest::Approx(1.0).epsilon(1e-6));
  CHECK_THROWS_AS(fit_saturable({1.0}, {0.5, 0.6}), std::invalid_argument);
}

TEST_CASE("jackknife standard error") {
  // delete-one means of {1,2,3,4}; the jackknife reproduces s/sqrt(n)
  const std::vector<double> loo = {3.0, 8.0 / 3.0, 7.0 / 3.0, 2.0};
  CHECK(jackknife_sigma(loo) == doctest::Approx(0.6454972243679028).epsilon(1e-13));
  CHECK(jackknife_sigma({1.0}) == 0.0);
}
