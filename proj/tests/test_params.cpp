#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "opo/params.hpp"

using namespace opo;

TEST_CASE("waist radius of the near-planar cavity") {
  CHECK(waist_radius(400e-9, 1.0, 0.1) == doctest::Approx(1.665821495001837e-4).epsilon(1e-13));
  // signal waist at the doubled wavelength
  const PhysicalParams p;
  const DerivedRates r = derive_rates(p);
  CHECK(r.w_p == doctest::Approx(1.665821495001837e-4).epsilon(1e-13));
  CHECK(r.w_s == doctest::Approx(std::sqrt(2.0) * r.w_p).epsilon(1e-15));
}

TEST_CASE("cavity decay rates") {
  const DerivedRates r = derive_rates(PhysicalParams{});
  CHECK(r.gamma_p == doctest::Approx(149896229.0).epsilon(1e-15));
  CHECK(r.gamma_s == doctest::Approx(14989622.9).epsilon(1e-15));
}

TEST_CASE("nonlinear coupling and noise strength") {
  const DerivedRates r = derive_rates(PhysicalParams{});
  CHECK(r.chi == doctest::Approx(64.101387663943).epsilon(1e-12));
  const DimensionlessParams q = reduce(PhysicalParams{});
  CHECK(q.kappa == doctest::Approx(10.0).epsilon(1e-15));
  CHECK(q.g == doctest::Approx(1.3523114460436486e-6).epsilon(1e-12));
  CHECK(q.d() == doctest::Approx(4.571865617751661e-13).epsilon(1e-12));
}

TEST_CASE("threshold power and pump strength") {
  PhysicalParams p;
  const DerivedRates r = derive_rates(p);
  CHECK(r.P_th == doctest::Approx(1.6282233983469827).epsilon(1e-12));
  CHECK(r.E_th == doctest::Approx(r.gamma_p * r.gamma_s / r.chi).epsilon(1e-15));

  p.P_laser = r.P_th;
  CHECK(derive_rates(p).E_p == doctest::Approx(r.E_th).epsilon(1e-12));
  p.P_laser = 2.0 * r.P_th;
  CHECK(reduce(p).sigma == doctest::Approx(1.4142135623730951).epsilon(1e-12));
  CHECK(sigma_from_power_ratio(2.0) == doctest::Approx(1.4142135623730951).epsilon(1e-15));
}

TEST_CASE("dimensionless helpers") {
  const DimensionlessParams q = dimensionless(1.4142135623730951, 1.0, 1e-3);
  CHECK(q.rho() == doctest::Approx(0.6435942529055827).epsilon(1e-14));
  CHECK(q.D() == doctest::Approx(6.035533905932736e-7).epsilon(1e-13));
}

TEST_CASE("domain guards") {
  PhysicalParams p;
  p.lambda_p = -1.0;
  CHECK_THROWS_AS(derive_rates(p), std::domain_error);
  p = PhysicalParams{};
  p.cavity_L = 3.0;  // 2R/L - 1 < 0: no stable waist
  CHECK_THROWS_AS(derive_rates(p), std::domain_error);
  CHECK_THROWS_AS(dimensionless(1.5, -1.0, 1e-3), std::domain_error);
  CHECK_THROWS_AS(sigma_from_power_ratio(-0.5), std::domain_error);
}
