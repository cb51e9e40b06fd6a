#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <complex>

#include "opo/analytics.hpp"
#include "opo/constants.hpp"

using namespace opo;
using constants::pi;

static const double SQ2 = 1.4142135623730951;

TEST_CASE("adiabatic eigensystem solves the 4x4 drift matrix") {
  for (double sigma : {1.2, SQ2, 2.0, 5.0}) {
    const Eigen::Matrix4d A = adiabatic_linear_matrix(sigma);
    const auto sys = adiabatic_eigensystem(sigma);
    CHECK(std::abs(sys[0].first) <= 1e-15);
    CHECK(sys[1].first == doctest::Approx(-2.0).epsilon(1e-15));
    CHECK(sys[2].first == doctest::Approx(-2.0 * (sigma - 1.0)).epsilon(1e-14));
    CHECK(sys[3].first == doctest::Approx(-2.0 * sigma).epsilon(1e-15));
    for (const auto& [lam, w] : sys) {
      CHECK(std::abs(w.norm() - 1.0) <= 1e-15);
      CHECK((A * w - lam * w).lpNorm<Eigen::Infinity>() <= 1e-13);
    }
  }
}

TEST_CASE("pump-inclusive 6x6: embedded directions and spectrum") {
  for (auto [sigma, kappa] : {std::pair{SQ2, 1.0}, std::pair{2.0, 10.0}, std::pair{1.1, 100.0}}) {
    const auto L = full_linear_matrix(sigma, kappa);
    CHECK((L * goldstone6()).lpNorm<Eigen::Infinity>() <= 1e-13);
    CHECK((L * damped6() + 2.0 * damped6()).lpNorm<Eigen::Infinity>() <= 1e-13);
    Eigen::EigenSolver<Eigen::Matrix<double, 6, 6>> es(L);
    int zeros = 0;
    for (int i = 0; i < 6; ++i) {
      const auto ev = es.eigenvalues()(i);
      if (std::abs(ev) <= 1e-10)
        ++zeros;
      else
        CHECK(ev.real() < -1e-3);
    }
    CHECK(zeros == 1);
  }
}

TEST_CASE("orientation diffusion constants") {
  CHECK(diffusion_D(SQ2, 1e-3) == doctest::Approx(6.035533905932736e-7).epsilon(1e-13));
  CHECK(orientation_variance(30.0, SQ2, 1e-3) ==
        doctest::Approx(1.8106601717798206e-5).epsilon(1e-13));
}

TEST_CASE("rotating-frame output spectra, closed forms") {
  CHECK(v_out_xb(SQ2, 0.0) == doctest::Approx(6.828427124746187).epsilon(1e-12));
  CHECK(v_out_yb(SQ2, 0.0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(v_out_xd(0.0) == 1.0);
  CHECK(v_out_xd(7.3) == 1.0);
  CHECK(std::abs(v_out_yd(0.0)) <= 1e-15);
  CHECK(v_out_yd(2.0) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(std::abs(v_out_xd_phi(0.5 * pi, 0.0)) <= 1e-15);
  CHECK(v_out_xd_phi(0.0, 1.0) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("projection correlators") {
  const double g = 1e-3;
  CHECK(proj_correlation(1, SQ2, g, 0.7) == doctest::Approx(-6.164924098540162e-8).epsilon(1e-12));
  CHECK(proj_correlation(2, SQ2, g, 0.7) == doctest::Approx(3.3796269432073535e-7).epsilon(1e-12));
  CHECK(proj_correlation(3, SQ2, g, 0.7) == doctest::Approx(2.440988907767433e-8).epsilon(1e-12));
  // even in the lag
  CHECK(proj_correlation(2, SQ2, g, -0.7) ==
        doctest::Approx(proj_correlation(2, SQ2, g, 0.7)).epsilon(1e-15));
  CHECK_THROWS_AS(proj_correlation(4, SQ2, g, 0.1), std::domain_error);
  CHECK(proj_spectrum(1, SQ2, g, 0.0) < 0.0);
  CHECK(proj_spectrum(2, SQ2, g, 0.0) > 0.0);
  CHECK(proj_spectrum(3, SQ2, g, 0.0) > 0.0);
}

TEST_CASE("spectra recomposed from projections match the closed forms") {
  for (double sigma : {SQ2, 2.0})
    for (int k = 0; k <= 40; ++k) {
      const double w = 0.5 * k;
      CHECK(std::abs(v_out_yd_composed(sigma, 1e-3, w) - v_out_yd(w)) <= 1e-12);
      CHECK(std::abs(v_out_xb_composed(sigma, 1e-3, w) - v_out_xb(sigma, w)) <= 1e-12);
      CHECK(std::abs(v_out_yb_composed(sigma, 1e-3, w) - v_out_yb(sigma, w)) <= 1e-12);
    }
}

TEST_CASE("wiener trigonometric correlations") {
  const double D = 0.1;
  CHECK(wiener_sin_correlation(D, 0.5, 0.5) == doctest::Approx(0.04758129098202021).epsilon(1e-13));
  CHECK(wiener_cos_correlation(D, 0.5, 0.5) == doctest::Approx(0.9524187090179799).epsilon(1e-13));
  CHECK(wiener_sin_correlation(D, 0.5, 1.5) == doctest::Approx(0.0452607240378281).epsilon(1e-13));
  CHECK(wiener_cos_correlation(D, 0.5, 1.5) == doctest::Approx(0.9059687004628859).epsilon(1e-13));
  CHECK(wiener_sin_correlation(D, 1.0, 2.0) == doctest::Approx(0.08621432071465457).epsilon(1e-13));
  CHECK(wiener_cos_correlation(D, 1.0, 2.0) == doctest::Approx(0.8650151037860594).epsilon(1e-13));
  CHECK(wiener_sin_correlation(D, 2.0, 2.0) == doctest::Approx(0.16483997698218036).epsilon(1e-13));
  CHECK(wiener_cos_correlation(D, 2.0, 2.0) == doctest::Approx(0.8351600230178197).epsilon(1e-13));
  // symmetric in the two times
  CHECK(wiener_sin_correlation(D, 1.5, 0.5) ==
        doctest::Approx(wiener_sin_correlation(D, 0.5, 1.5)).epsilon(1e-15));
  // sin correlation vanishes from theta(0) = 0
  CHECK(std::abs(wiener_sin_correlation(D, 0.0, 2.0)) <= 1e-15);
}

TEST_CASE("fixed-LO window theory: optimum and values") {
  CHECK(optimal_detection_time(SQ2, 1e-4) == doctest::Approx(91.01797211244548).epsilon(1e-13));
  CHECK(optimal_detection_time(SQ2, 1e-13) == doctest::Approx(2878240.998850149).epsilon(1e-13));
  const double Topt = optimal_detection_time(SQ2, 1e-4);
  // V(T*) = 1/T* identically in the small-d theory
  CHECK(fixed_lo_spectrum(SQ2, 1e-4, Topt, 0.0, 0.5 * pi) ==
        doctest::Approx(1.0 / Topt).epsilon(1e-12));
  CHECK(fixed_lo_spectrum(SQ2, 1e-4, Topt, 0.0, 0.5 * pi) ==
        doctest::Approx(0.0109868411346781).epsilon(1e-12));
  CHECK(to_decibels(0.0109868411346781) == doctest::Approx(-19.59127155163059).epsilon(1e-12));
  // the perpendicular setting never evaluates the (omega -> 0 divergent) s0 part
  CHECK(std::isfinite(fixed_lo_spectrum(SQ2, 1e-4, 10.0, 0.0, 0.5 * pi)));
  CHECK(fixed_lo_spectrum(SQ2, 1e-4, 10.0, 1.0, 0.0) ==
        doctest::Approx(1.0 + fixed_lo_s0(SQ2, 1e-4, 10.0, 1.0)).epsilon(1e-15));
  CHECK(fixed_lo_spectrum(SQ2, 1e-4, 10.0, 1.0, 0.5 * pi) ==
        doctest::Approx(1.0 + fixed_lo_s90(SQ2, 1e-4, 10.0, 1.0)).epsilon(1e-15));
}

TEST_CASE("exact windowed evaluator vs small-d closed forms") {
  // phase quadrature, long window: expansion error O(dT) and O(1/T)
  const double ve = fixed_lo_spectrum_exact(SQ2, 1e-6, 300.0, 0.0, 0.5 * pi);
  const double vc = fixed_lo_spectrum(SQ2, 1e-6, 300.0, 0.0, 0.5 * pi);
  CHECK(std::abs(ve - vc) <= 5e-3 * vc);
  // amplitude quadrature away from the omega -> 0 artifact
  const double ve0 = fixed_lo_spectrum_exact(SQ2, 1e-6, 300.0, 3.0, 0.0);
  const double vc0 = fixed_lo_spectrum(SQ2, 1e-6, 300.0, 3.0, 0.0);
  CHECK(std::abs(ve0 - vc0) <= 2e-2 * std::abs(vc0));
}

TEST_CASE("exact windowed evaluator vs brute-force double integral") {
  const double sigma = SQ2, g = 0.02, d = 1e-4, T = 2.0, omega = 1.0, phi = 0.25 * pi;
  const int n = 601;
  const double h = T / (n - 1);
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    const double t1 = i * h;
    const double wi = (i == 0 || i == n - 1) ? 0.5 : 1.0;
    for (int j = 0; j < n; ++j) {
      const double t2 = j * h;
      const double wj = (j == 0 || j == n - 1) ? 0.5 : 1.0;
      acc += wi * wj * std::cos(omega * (t1 - t2)) * still_correlation(sigma, g, phi, t1, t2);
    }
  }
  const double brute = 1.0 + 2.0 / (g * g * T) * acc * h * h;
  const double exact = fixed_lo_spectrum_exact(sigma, d, T, omega, phi);
  CHECK(exact == doctest::Approx(brute).epsilon(2e-3));
}

TEST_CASE("optimal analysis frequency moves off zero when the LO is tilted") {
  const double d = 1e-10;
  const double T = optimal_detection_time(SQ2, d);
  CHECK(optimal_frequency(SQ2, d, T, 0.5 * pi) <= 1e-3);
  CHECK(optimal_frequency(SQ2, d, T, 88.0 * pi / 180.0) > 1e-2);
}

TEST_CASE("poisson brackets: numeric vs closed") {
  const cplx bp = 0.9 * std::exp(cplx(0.0, 0.3));
  const cplx bm = 0.5 * std::exp(cplx(0.0, 0.5));
  const double phi = 0.3;
  const Field2 X = [phi](cplx p, cplx m) { return xd_quadrature(p, m, phi); };
  const Field2 Xq = [phi](cplx p, cplx m) { return xd_quadrature(p, m, phi + 0.5 * pi); };
  const Field2 TH = [](cplx p, cplx m) { return orientation_angle(p, m); };
  CHECK(poisson_bracket2(X, Xq, bp, bm) ==
        doctest::Approx(bracket_xx_closed(0.9, 0.5)).epsilon(1e-5));
  CHECK(bracket_xx_closed(0.9, 0.5) == doctest::Approx(-0.1777777777777778).epsilon(1e-13));
  CHECK(poisson_bracket2(X, TH, bp, bm) ==
        doctest::Approx(bracket_xtheta_closed(0.9, 0.5, 0.4, phi)).epsilon(1e-5));
  // equal moduli: the pair becomes canonically conjugate-free
  const double rho = 0.6435942529055827;
  CHECK(std::abs(bracket_xx_closed(rho, rho)) <= 1e-15);
  CHECK(bracket_xtheta_closed(rho, rho, 0.0, 0.5 * pi) ==
        doctest::Approx(-1.0986841134678098).epsilon(1e-12));
  // single mode {X, Y} = 2 with X = 2 Re b, Y = 2 Im b
  const Field1 Xs = [](cplx b) { return 2.0 * b.real(); };
  const Field1 Ys = [](cplx b) { return 2.0 * b.imag(); };
  CHECK(poisson_bracket1(Xs, Ys, cplx(0.3, -0.8)) == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("helpers: sinc, decibels, golden section") {
  CHECK(sinc(0.0) == 1.0);
  CHECK(sinc(1e-8) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(sinc(0.5) == doctest::Approx(0.958851077208406).epsilon(1e-14));
  CHECK(std::abs(to_decibels(1.0)) <= 1e-15);
  CHECK(to_decibels(0.1) == doctest::Approx(-10.0).epsilon(1e-13));
  auto [xm, fm] = golden_min([](double x) { return (x - 2.0) * (x - 2.0) + 1.0; }, 0.0, 5.0, 1e-10);
  CHECK(xm == doctest::Approx(2.0).epsilon(1e-7));
  CHECK(fm == doctest::Approx(1.0).epsilon(1e-12));
  auto [xe, fe] = golden_min([](double x) { return x; }, 1.0, 3.0, 1e-10);
  CHECK(xe == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(fe == doctest::Approx(1.0).epsilon(1e-12));
}
