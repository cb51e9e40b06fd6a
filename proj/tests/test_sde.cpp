#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "opo/analytics.hpp"
#include "opo/sde.hpp"

using namespace opo;

static const double SQ2 = 1.4142135623730951;

namespace {

// complex Ornstein-Uhlenbeck process with additive noise, for scheme checks
struct OuSys {
  static constexpr std::size_t dim = 1;
  double lambda, gamma;
  State<1> drift(const State<1>& b) const { return {-lambda * b[0]}; }
  State<1> noise(const State<1>&, const std::array<cplx, 2>& w) const { return {gamma * w[0]}; }
};

struct GrowSys {
  static constexpr std::size_t dim = 1;
  State<1> drift(const State<1>& b) const { return {10.0 * b[0]}; }
  State<1> noise(const State<1>&, const std::array<cplx, 2>&) const { return {0.0}; }
};

template <std::size_t N>
double max_abs(const State<N>& a) {
  double m = 0;
  for (const auto& c : a) m = std::max(m, std::abs(c));
  return m;
}

}  // namespace

TEST_CASE("system names parse and print") {
  CHECK(parse_system_kind("full") == SystemKind::full);
  CHECK(parse_system_kind("adiabatic") == SystemKind::adiabatic);
  CHECK(parse_system_kind("reduced") == SystemKind::reduced);
  CHECK(to_string(SystemKind::reduced) == "reduced");
  CHECK_THROWS_AS(parse_system_kind("bogus"), std::invalid_argument);
}

TEST_CASE("deterministic steady states are fixed points of the drift") {
  const Full6 f{2.0, 1.3, 1e-3};
  CHECK(max_abs(f.drift(f.steady_state())) <= 1e-14);
  const Reduced4 r{2.0, 1.3, 1e-3};
  CHECK(max_abs(r.drift(r.steady_state())) <= 1e-14);
  Adiabatic4 a{2.0, 1e-3, false};  // Ito drift: exact fixed point
  CHECK(max_abs(a.drift(a.steady_state())) <= 1e-14);
  a.stratonovich = true;  // correction shifts the drift by (g^2/4) rho
  const double rho = std::sqrt(2.0 - 1.0);
  CHECK(max_abs(a.drift(a.steady_state())) ==
        doctest::Approx(0.25e-6 * rho).epsilon(1e-10));
}

TEST_CASE("reduced system reproduces the full one on the conjugate manifold") {
  const double dt = 1e-3;
  const Full6 f{SQ2, 1.0, 0.05};
  const Reduced4 r{SQ2, 1.0, 0.05};
  State<6> bf = f.steady_state();
  State<4> br = r.steady_state();
  TrajectoryRng g1(7, 3), g2(7, 3);
  for (int n = 0; n < 500; ++n) {
    const std::array<cplx, 2> w1 = {g1.complex_wiener(dt), g1.complex_wiener(dt)};
    const std::array<cplx, 2> w2 = {g2.complex_wiener(dt), g2.complex_wiener(dt)};
    midpoint_step(f, bf, dt, w1, 3);
    midpoint_step(r, br, dt, w2, 3);
  }
  for (int i = 0; i < 4; ++i) CHECK(std::abs(bf[i] - br[i]) <= 1e-13);
  CHECK(f.symmetry_deviation(bf) <= 1e-13);
  // the pump rows stay real on this manifold
  CHECK(std::abs(bf[0].imag()) <= 1e-15);
  // and the trajectory actually moved
  CHECK(std::abs(bf[2] - f.steady_state()[2]) > 1e-4);
}

TEST_CASE("orientation extraction") {
  SignalView s{1.0, 1.0, std::exp(cplx(0.0, 2.0)), 1.0};
  s.bpp = 1.0;
  CHECK(theta_raw(s) == doctest::Approx(1.0).epsilon(1e-14));
  s.bm = std::exp(cplx(0.0, -2.8));
  CHECK(theta_raw(s) == doctest::Approx(-1.4).epsilon(1e-14));

  const double pi = constants::pi;
  CHECK(theta_unwrap(0.2, 0.3) == doctest::Approx(0.2).epsilon(1e-15));
  CHECK(theta_unwrap(-1.5, 1.7) == doctest::Approx(-1.5 + pi).epsilon(1e-14));
  CHECK(theta_unwrap(1.5, -1.6) == doctest::Approx(1.5 - pi).epsilon(1e-14));
  CHECK(theta_unwrap(0.1, 6.4) == doctest::Approx(0.1 + 2.0 * pi).epsilon(1e-14));
}

TEST_CASE("dark quadrature: zero on the pattern, classical reduction is real") {
  const Full6 f{SQ2, 1.0, 1e-3};
  const SignalView at = f.signal(f.steady_state());
  CHECK(std::abs(dark_quadrature(at, 0.0, 0.7)) <= 1e-15);

  const cplx bp = 0.9 * std::exp(cplx(0.0, 0.3));
  const cplx bm = 0.5 * std::exp(cplx(0.0, 0.5));
  const SignalView s{bp, std::conj(bp), bm, std::conj(bm)};
  const double th = theta_raw(s);
  CHECK(th == doctest::Approx(orientation_angle(bp, bm)).epsilon(1e-14));
  for (double phi : {0.0, 0.4, 1.3}) {
    // pattern frame: matches the classical function used by the brackets
    const cplx q = dark_quadrature(s, th, phi);
    CHECK(std::abs(q.imag()) <= 1e-15);
    CHECK(q.real() == doctest::Approx(xd_quadrature(bp, bm, phi)).epsilon(1e-12));
    // fixed frame (theta = 0): X = -sqrt(2) Im[e^{-i phi}(bp - bm)]
    const cplx q0 = dark_quadrature(s, 0.0, phi);
    const double want =
        -std::sqrt(2.0) * (std::exp(cplx(0.0, -phi)) * (bp - bm)).imag();
    CHECK(std::abs(q0.imag()) <= 1e-15);
    CHECK(q0.real() == doctest::Approx(want).epsilon(1e-13));
  }
}

TEST_CASE("midpoint step solves the implicit trapezoid rule") {
  const OuSys ou{1.0, 1.3};
  const double dt = 0.01;
  const cplx w(0.03, -0.02);
  State<1> b = {cplx(0.7, -0.4)};
  midpoint_step(ou, b, dt, {w, cplx(0.0, 0.0)}, 40);
  const cplx closed = ((1.0 - 0.5 * ou.lambda * dt) * cplx(0.7, -0.4) + ou.gamma * w) /
                      (1.0 + 0.5 * ou.lambda * dt);
  CHECK(std::abs(b[0] - closed) <= 1e-15);

  // zero midpoint iterations degenerate to Euler-Maruyama
  State<1> b1 = {cplx(0.7, -0.4)}, b2 = {cplx(0.7, -0.4)};
  midpoint_step(ou, b1, dt, {w, cplx(0.0, 0.0)}, 0);
  euler_step(ou, b2, dt, {w, cplx(0.0, 0.0)});
  CHECK(std::abs(b1[0] - b2[0]) == 0.0);
}

TEST_CASE("trajectory driver: recording, blow-up, branch counting") {
  TrajectoryRng rng(11, 0);
  long calls = 0;
  const GrowSys grow;
  auto st = integrate_trajectory(grow, State<1>{cplx(1.0, 0.0)}, 0.1, 40, 2, 1e3, rng,
                                 [&](long, const State<1>&) { ++calls; });
  CHECK(!st.ok);
  CHECK(st.steps_done < 40);
  CHECK(calls == st.steps_done);

  const Full6 f{2.0, 1.0, 1e-3};
  calls = 0;
  auto st2 = integrate_trajectory(f, f.steady_state(), 1e-3, 200, 2, 1e6, rng,
                                  [&](long, const State<6>&) { ++calls; });
  CHECK(st2.ok);
  CHECK(st2.steps_done == 200);
  CHECK(calls == 201);
  CHECK(st2.branch_crossings == 0);
  CHECK(st2.sym_dev <= 1e-12);
}

TEST_CASE("per-trajectory rng streams") {
  TrajectoryRng a(42, 5), b(42, 5), c(42, 6);
  bool all_equal = true, any_diff = false;
  for (int i = 0; i < 16; ++i) {
    const double x = a.normal(), y = b.normal(), z = c.normal();
    all_equal = all_equal && (x == y);
    any_diff = any_diff || (x != z);
  }
  CHECK(all_equal);
  CHECK(any_diff);
}

TEST_CASE("gaussian transform domain and moments") {
  CHECK_THROWS_AS(gaussian_pair(0.0, 0.5), std::domain_error);
  CHECK_THROWS_AS(gaussian_pair(1.5, 0.5), std::domain_error);
  CHECK_THROWS_AS(gaussian_pair(0.5, -0.1), std::domain_error);
  CHECK_THROWS_AS(gaussian_pair(0.5, 1.0), std::domain_error);
  CHECK(gaussian_pair(1.0, 0.0) == 0.0);

  TrajectoryRng rng(2024, 17);
  const double dtau = 0.3;
  const int n = 20000;
  cplx mean = 0.0, sq = 0.0;
  double abs2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const cplx w = rng.complex_wiener(dtau);
    mean += w;
    sq += w * w;
    abs2 += std::norm(w);
  }
  mean /= n;
  sq /= n;
  abs2 /= n;
  CHECK(std::abs(mean) <= 0.05 * std::sqrt(dtau));
  CHECK(std::abs(sq) <= 0.05 * dtau);
  CHECK(abs2 / dtau == doctest::Approx(1.0).epsilon(0.05));
}
