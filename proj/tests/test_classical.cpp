#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <vector>

#include "opo/classical.hpp"

using namespace opo;

namespace {
double residual_max(const SteadyState& s, double sigma) {
  const auto r = classical_residual(s, sigma);
  double m = 0;
  for (const auto& c : r) m = std::max(m, std::abs(c));
  return m;
}
}  // namespace

TEST_CASE("steady states solve the stationary equations") {
  CHECK(residual_max(classical_steady_state(0.5, 0.0), 0.5) <= 1e-15);
  CHECK(residual_max(classical_steady_state(1.4142135623730951, 0.7), 1.4142135623730951) <= 1e-15);
  const SteadyState s = classical_steady_state(2.0, 0.3);
  CHECK(s.b0.real() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(std::abs(s.bp) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(std::arg(s.bm) == doctest::Approx(0.3).epsilon(1e-14));
  // bp and bm carry opposite phases
  CHECK(std::abs(s.bp * s.bm - std::abs(s.bp) * std::abs(s.bm)) <= 1e-15);
  CHECK_THROWS_AS(classical_steady_state(-0.1, 0.0), std::domain_error);
}

TEST_CASE("stability below threshold") {
  const SteadyState s = classical_steady_state(0.5, 0.0);
  auto eigs = classical_stability_eigs(s, 0.5, 2.0);
  std::vector<double> re;
  for (auto& e : eigs) {
    CHECK(std::abs(e.imag()) <= 1e-12);
    re.push_back(e.real());
  }
  std::sort(re.begin(), re.end());
  const double want[6] = {-2.0, -2.0, -1.5, -1.5, -0.5, -0.5};
  for (int i = 0; i < 6; ++i) CHECK(re[i] == doctest::Approx(want[i]).epsilon(1e-10));
}

TEST_CASE("stability above threshold: one Goldstone zero, rest damped") {
  for (double sigma : {1.2, 1.4142135623730951, 3.0}) {
    const SteadyState s = classical_steady_state(sigma, 0.4);
    auto eigs = classical_stability_eigs(s, sigma, 1.0);
    std::sort(eigs.begin(), eigs.end(),
              [](cplx a, cplx b) { return std::abs(a) < std::abs(b); });
    CHECK(std::abs(eigs[0]) <= 1e-10);
    for (int i = 1; i < 6; ++i) CHECK(eigs[i].real() < -1e-3);
  }
}

TEST_CASE("mode functions are unit normalized") {
  // waists of order one; quadrature converges well before the box edge
  CHECK(mode_norm_l2(0, 1.0, 0.0, 4.0, 401) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(mode_norm_l2(1, 1.3, 0.0, 6.0, 401) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(mode_norm_l2(2, 1.0, 0.6, 4.5, 401) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(mode_norm_l2(3, 1.0, -1.1, 4.5, 401) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK_THROWS_AS(mode_norm_l2(7, 1.0, 0.0, 4.0, 101), std::domain_error);
  CHECK_THROWS_AS(laguerre_mode(2, 0.1, 0.1, 1.0), std::domain_error);
}

TEST_CASE("hermite-gauss pair is orthogonal and rotates as expected") {
  const double w = 1.0, half = 4.5;
  const int n = 301;
  const double h = 2.0 * half / (n - 1);
  cplx acc = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double x = -half + i * h, y = -half + j * h;
      const double wx = (i == 0 || i == n - 1) ? 0.5 : 1.0;
      const double wy = (j == 0 || j == n - 1) ? 0.5 : 1.0;
      acc += wx * wy * hg10(x, y, 0.2, w) * std::conj(hg01(x, y, 0.2, w));
    }
  CHECK(std::abs(acc) * h * h <= 1e-12);

  // rotation: H10^psi = cos(psi) H10^0 + sin(psi) H01^0
  const double psi = 0.45;
  for (auto [x, y] : {std::pair{0.3, -0.7}, std::pair{1.1, 0.2}}) {
    const cplx lhs = hg10(x, y, psi, w);
    const cplx rhs = std::cos(psi) * hg10(x, y, 0.0, w) + std::sin(psi) * hg01(x, y, 0.0, w);
    CHECK(std::abs(lhs - rhs) <= 1e-15);
  }
  // H10 at psi=0 is real and even in y, odd in x
  CHECK(std::abs(hg10(0.4, 0.9, 0.0, w).imag()) <= 1e-16);
  CHECK(hg10(0.4, 0.9, 0.0, w).real() ==
        doctest::Approx(-hg10(-0.4, 0.9, 0.0, w).real()).epsilon(1e-15));
}

TEST_CASE("signal pattern amplitude") {
  const double sigma = 1.4142135623730951;
  const cplx a = signal_pattern(0.5, 0.1, sigma, 0.25, 1.0);
  const cplx want = std::sqrt(2.0 * (sigma - 1.0)) * hg10(0.5, 0.1, 0.25, 1.0);
  CHECK(std::abs(a - want) <= 1e-16);
  CHECK(std::abs(signal_pattern(0.5, 0.1, 0.9, 0.25, 1.0)) == 0.0);
}

TEST_CASE("pattern CSV row count") {
  const char* path = "pattern_test_tmp.csv";
  const long rows = write_pattern_csv(path, 2.0, 0.0, 1.0, 2.0, 11);
  CHECK(rows == 121);
  std::remove(path);
}
