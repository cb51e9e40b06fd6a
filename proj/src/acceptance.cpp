#include "opo/acceptance.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdarg>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "opo/analytics.hpp"
#include "opo/ensemble.hpp"
#include "opo/io.hpp"
#include "opo/rng.hpp"
#include "opo/sde.hpp"

// Every tolerance and seed in this file is frozen; a failing line here means
// the build broke an invariant, not that a knob needs retuning.

namespace opo {

namespace {

constexpr double kSqrt2 = 1.4142135623730951;

std::string strf(const char* fmt, ...) {
  char buf[512];
  va_list args;
  va_start(args, fmt);
  std::vsnprintf(buf, sizeof buf, fmt, args);
  va_end(args);
  return buf;
}

// ---------------------------------------------------------------------------
// 1. linearized eigensystems
// ---------------------------------------------------------------------------

void criterion1(std::vector<CriterionResult>& out) {
  CriterionResult c{1, "linearized-eigensystems", true, ""};
  double worst = 0.0;

  for (const double sigma : {kSqrt2, 2.0, 1.1}) {
    const Eigen::Matrix4d L = adiabatic_linear_matrix(sigma);
    const auto sys = adiabatic_eigensystem(sigma);

    // closed-form pairs satisfy the matrix exactly
    for (const auto& [lam, w] : sys)
      worst = std::max(worst, (L * w - lam * w).cwiseAbs().maxCoeff());

    // a generic solver reproduces the eigenvalue multiset
    Eigen::EigenSolver<Eigen::Matrix4d> es(L);
    std::vector<std::complex<double>> ev(es.eigenvalues().data(), es.eigenvalues().data() + 4);
    std::vector<bool> used(4, false);
    for (const auto& [lam, w] : sys) {
      int best = -1;
      double bd = 1e300;
      for (int j = 0; j < 4; ++j) {
        if (used[j]) continue;
        const double dd = std::abs(ev[j] - std::complex<double>(lam, 0.0));
        if (dd < bd) {
          bd = dd;
          best = j;
        }
      }
      used[best] = true;
      worst = std::max(worst, bd);

      // eigenvector alignment only where the eigenvalue is isolated
      double gap = 1e300;
      for (const auto& [lam2, w2] : sys)
        if (&w2 != &w) gap = std::min(gap, std::abs(lam2 - lam));
      if (gap > 1e-6) {
        Eigen::Vector4cd v = es.eigenvectors().col(best);
        v.normalize();
        const double align = std::abs((v.adjoint() * w.cast<std::complex<double>>())(0));
        worst = std::max(worst, 1.0 - align);
      }
    }
  }

  // 6x6 pump+signal matrix: Goldstone pair at the quoted parameter points
  const double pts[3][2] = {{kSqrt2, 1.0}, {2.0, 10.0}, {1.1, 100.0}};
  for (const auto& p : pts) {
    const auto L6 = full_linear_matrix(p[0], p[1]);
    worst = std::max(worst, (L6 * goldstone6()).cwiseAbs().maxCoeff());
    worst = std::max(worst, (L6 * damped6() + 2.0 * damped6()).cwiseAbs().maxCoeff());
  }

  c.pass = worst <= 1e-12;
  c.detail = strf("max eigen residual %.3g (tol 1e-12)", worst);
  out.push_back(c);
}

// ---------------------------------------------------------------------------
// 2. closed-form consistency
// ---------------------------------------------------------------------------

void criterion2(std::vector<CriterionResult>& out) {
  CriterionResult c{2, "closed-form-consistency", true, ""};

  double comp = 0.0;
  for (int i = 0; i <= 200; ++i) {
    const double w = 20.0 * i / 200.0;
    comp = std::max(comp, std::abs(v_out_yd_composed(kSqrt2, 1e-3, w) - v_out_yd(w)));
  }

  double argmin_dev = 0.0;
  for (const double d : {1e-6, 1e-10, 1e-13}) {
    const double Topt = optimal_detection_time(kSqrt2, d);
    const auto [Tstar, vstar] = golden_min(
        [&](double T) {
          return fixed_lo_spectrum_exact(kSqrt2, d, T, 0.0, 0.5 * constants::pi);
        },
        Topt / 3.0, 3.0 * Topt, 1e-4 * Topt);
    (void)vstar;
    argmin_dev = std::max(argmin_dev, std::abs(Tstar / Topt - 1.0));
  }

  c.pass = comp <= 1e-10 && argmin_dev <= 0.01;
  c.detail = strf("composition dev %.3g (tol 1e-10), argmin dev %.3g (tol 0.01)", comp,
                  argmin_dev);
  out.push_back(c);
}

// ---------------------------------------------------------------------------
// 3, 4, 7: figure-4 desk-scale ensemble
// ---------------------------------------------------------------------------

RunConfig fig4_config() {
  RunConfig cfg;
  cfg.system = "full";
  cfg.sigma = kSqrt2;
  cfg.kappa = 1.0;
  cfg.g = 1e-3;
  cfg.dtau = 3e-3;
  cfg.tau_end = 30.0;
  cfg.n_traj = 20000;
  cfg.seed = 1080;
  cfg.block_size = 256;
  cfg.want_spectra = true;
  cfg.tau_cut = 10.0;
  cfg.lag_max = 5.0;
  for (int i = 0; i <= 40; ++i) cfg.omega.push_back(0.5 * i);
  return cfg;
}

void fig4_group(std::vector<CriterionResult>& out) {
  const RunConfig cfg = fig4_config();
  const RunResult full = run_ensemble(cfg);

  {
    CriterionResult c{3, "phase-diffusion-slope", true, ""};
    const SlopeFit& f = full.vtheta_slope;
    c.pass = std::abs(f.slope - 1.0) <= 0.03 && f.r2 > 0.99;
    c.detail = strf("slope %.5f +- %.5f (target 1 +- 0.03), R^2 %.5f (> 0.99)", f.slope,
                    f.slope_err, f.r2);
    out.push_back(c);
  }

  {
    CriterionResult c{4, "squeezing-spectra", true, ""};
    const SaturableFit fit = fit_saturable(full.spec_yd.omega, full.spec_yd.v);
    double zx = 0.0, devx = 0.0;
    for (std::size_t i = 0; i < full.spec_xd.v.size(); ++i) {
      zx = std::max(zx, std::abs(full.spec_xd.v[i] - 1.0) / full.spec_xd.err[i]);
      devx = std::max(devx, std::abs(full.spec_xd.v[i] - 1.0));
    }
    c.pass = fit.converged && fit.a >= 0.9 && fit.a <= 1.1 && fit.b >= 0.9 && fit.b <= 1.1 &&
             zx <= 3.0;
    // The X_d estimator resolves the O(g^2) correction the linearized V=1
    // omits (a Lorentzian of width 2+2*sigma, ~6e-8 at g=1e-3), so the z gate
    // reports that systematic, not a sampling fluke; devx shows its scale.
    c.detail = strf("Y_d fit a %.4f b %.4f (bands [0.9,1.1]), max X_d |z| %.2f (tol 3), "
                    "max |V_xd-1| %.2g",
                    fit.a, fit.b, zx, devx);
    out.push_back(c);
  }

  {
    CriterionResult c{7, "conjugate-reduction", true, ""};
    RunConfig rc = cfg;
    rc.system = "reduced";
    rc.n_traj = 10000;
    rc.seed = 1081;
    rc.want_spectra = false;
    rc.omega.clear();
    const RunResult red = run_ensemble(rc);
    const double dz = std::abs(full.vtheta_slope.slope - red.vtheta_slope.slope) /
                      std::hypot(full.vtheta_slope.slope_err, red.vtheta_slope.slope_err);
    c.pass = full.max_sym_dev <= 1e-8 && dz <= 3.0;
    c.detail = strf("conjugate dev %.3g (tol 1e-8), full/reduced slope z %.2f (tol 3)",
                    full.max_sym_dev, dz);
    out.push_back(c);
  }
}

// ---------------------------------------------------------------------------
// 5. fixed-LO windowed spectrum at the optimal detection time
// ---------------------------------------------------------------------------

void criterion5(std::vector<CriterionResult>& out) {
  CriterionResult c{5, "fixed-lo-window", true, ""};
  const double sigma = kSqrt2, d = 1e-4, g = 0.02;
  const double Topt = optimal_detection_time(sigma, d);
  const long nsteps = 11377;
  const double dtau = Topt / nsteps;

  RunConfig cfg;
  cfg.system = "reduced";
  cfg.sigma = sigma;
  cfg.kappa = 1.0;
  cfg.g = g;
  cfg.dtau = dtau;
  cfg.tau_end = dtau * nsteps;
  cfg.n_traj = 16384;
  cfg.seed = 5150;
  cfg.block_size = 256;
  cfg.want_fixedlo = true;
  cfg.omega = {0.0};
  cfg.phi = {88.0 * constants::pi / 180.0, 0.5 * constants::pi};
  cfg.window_T = cfg.tau_end;
  const RunResult res = run_ensemble(cfg);

  const double v88 = res.fixedlo[0].v[0];
  const double v90 = res.fixedlo[1].v[0];
  const double err90 = res.fixedlo[1].err[0];
  const double vth = fixed_lo_spectrum(sigma, d, res.window_T, 0.0, 0.5 * constants::pi);
  const double z = std::abs(v90 - vth) / err90;
  c.pass = z <= 3.0 && v88 > v90;
  c.detail = strf("V(90deg) %.5f vs %.5f, z %.2f (tol 3); V(88deg) %.3f > V(90deg): %s", v90, vth,
                  z, v88, v88 > v90 ? "yes" : "no");
  out.push_back(c);
}

// ---------------------------------------------------------------------------
// 6. integrator verification (micro-systems)
// ---------------------------------------------------------------------------

struct OuSys {
  static constexpr std::size_t dim = 1;
  double lam, gam;
  State<1> drift(const State<1>& b) const { return {-lam * b[0]}; }
  State<1> noise(const State<1>&, const std::array<cplx, 2>& w) const { return {gam * w[0]}; }
};

struct GeomSys {
  static constexpr std::size_t dim = 1;
  State<1> drift(const State<1>&) const { return {0.0}; }
  State<1> noise(const State<1>& b, const std::array<cplx, 2>& w) const { return {b[0] * w[0]}; }
};

void criterion6(std::vector<CriterionResult>& out) {
  CriterionResult c{6, "integrator-verification", true, ""};

  // (a) OU stationary variance Gamma^2 / (2 lambda)
  const OuSys ou{1.0, 1.3};
  double s1 = 0.0, s2 = 0.0;
  const int nou = 4096;
  for (int k = 0; k < nou; ++k) {
    TrajectoryRng rng(101, k);
    State<1> x = {0.0};
    for (int n = 0; n < 1000; ++n) {
      const std::array<cplx, 2> w = {cplx(rng.normal() * std::sqrt(0.01), 0.0), 0.0};
      midpoint_step(ou, x, 0.01, w, 2);
    }
    const double q = x[0].real() * x[0].real();
    s1 += q;
    s2 += q * q;
  }
  const double vou = s1 / nou;
  const double se_ou = std::sqrt((s2 / nou - vou * vou) / nou);
  const double z_ou = std::abs(vou - 0.845) / se_ou;

  // (b) Stratonovich vs Ito: dx = x dW; midpoint -> <x> = e^{tau/2}, Euler -> 1
  const GeomSys gm;
  const int ng = 20000;
  double sm = 0.0, sm2 = 0.0, se = 0.0, se2 = 0.0;
  for (int k = 0; k < ng; ++k) {
    TrajectoryRng rng(202, k);
    State<1> xm = {1.0}, xe = {1.0};
    for (int n = 0; n < 500; ++n) {
      const std::array<cplx, 2> w = {cplx(rng.normal() * std::sqrt(2e-3), 0.0), 0.0};
      midpoint_step(gm, xm, 2e-3, w, 2);
      euler_step(gm, xe, 2e-3, w);
    }
    sm += xm[0].real();
    sm2 += xm[0].real() * xm[0].real();
    se += xe[0].real();
    se2 += xe[0].real() * xe[0].real();
  }
  const double mm = sm / ng, me = se / ng;
  const double sem = std::sqrt((sm2 / ng - mm * mm) / ng);
  const double see = std::sqrt((se2 / ng - me * me) / ng);
  const double z_strat = std::abs(mm - std::exp(0.5)) / sem;
  const double z_ito = std::abs(me - 1.0) / see;
  const double z_sep = (mm - me) / std::hypot(sem, see);

  // (c) complex Wiener increment statistics at 1e6 samples
  const double dt = 0.25;
  const long nw = 1000000;
  TrajectoryRng rng(307, 0);
  double sre = 0, sim = 0, sabs = 0, sw2r = 0, sw2i = 0;
  for (long k = 0; k < nw; ++k) {
    const cplx w = rng.complex_wiener(dt);
    sre += w.real();
    sim += w.imag();
    sabs += std::norm(w);
    const cplx w2 = w * w;
    sw2r += w2.real();
    sw2i += w2.imag();
  }
  const double rn = std::sqrt(static_cast<double>(nw));
  const double z_mr = std::abs(sre / nw) / (std::sqrt(dt / 2) / rn);
  const double z_mi = std::abs(sim / nw) / (std::sqrt(dt / 2) / rn);
  const double z_abs = std::abs(sabs / nw - dt) / (dt / rn);
  const double z_w2r = std::abs(sw2r / nw) / (dt / rn);
  const double z_w2i = std::abs(sw2i / nw) / (dt / rn);
  const double z_noise = std::max({z_mr, z_mi, z_abs, z_w2r, z_w2i});

  c.pass = z_ou <= 3.0 && z_strat <= 3.0 && z_ito <= 3.0 && z_sep > 10.0 && z_noise <= 3.0;
  c.detail = strf("OU z %.2f; Strat z %.2f, Ito z %.2f, separation %.0f sigma (>10); "
                  "noise stats max z %.2f (tol 3)",
                  z_ou, z_strat, z_ito, z_sep, z_noise);
  out.push_back(c);
}

// ---------------------------------------------------------------------------
// 8. Wiener trigonometric correlation oracle
// ---------------------------------------------------------------------------

void criterion8(std::vector<CriterionResult>& out) {
  CriterionResult c{8, "wiener-oracle", true, ""};
  const double D = 0.1;
  const double pairs[4][2] = {{0.5, 0.5}, {0.5, 1.5}, {1.0, 2.0}, {2.0, 2.0}};
  const long n = 100000;
  double zmax = 0.0;
  for (int p = 0; p < 4; ++p) {
    const double t1 = pairs[p][0], t2 = pairs[p][1];
    TrajectoryRng rng(404, p);
    double ss = 0, ss2 = 0, sc = 0, sc2 = 0;
    for (long k = 0; k < n; ++k) {
      const double w1 = std::sqrt(D * t1) * rng.normal();
      const double w2 = w1 + std::sqrt(D * (t2 - t1)) * rng.normal();
      const double qs = std::sin(w1) * std::sin(w2);
      const double qc = std::cos(w1) * std::cos(w2);
      ss += qs;
      ss2 += qs * qs;
      sc += qc;
      sc2 += qc * qc;
    }
    const double ms = ss / n, mc = sc / n;
    const double ses = std::sqrt((ss2 / n - ms * ms) / n);
    const double sec = std::sqrt((sc2 / n - mc * mc) / n);
    zmax = std::max(zmax, std::abs(ms - wiener_sin_correlation(D, t1, t2)) / ses);
    zmax = std::max(zmax, std::abs(mc - wiener_cos_correlation(D, t1, t2)) / sec);
  }
  c.pass = zmax <= 3.0;
  c.detail = strf("max |z| over 4 lag pairs (S and C) %.2f (tol 3)", zmax);
  out.push_back(c);
}

// ---------------------------------------------------------------------------
// 9. determinism across worker counts
// ---------------------------------------------------------------------------

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void criterion9(std::vector<CriterionResult>& out) {
  CriterionResult c{9, "determinism", true, ""};
  RunConfig cfg;
  cfg.system = "full";
  cfg.sigma = kSqrt2;
  cfg.kappa = 1.0;
  cfg.g = 1e-3;
  cfg.dtau = 3e-3;
  cfg.tau_end = 0.3;
  cfg.n_traj = 4096;
  cfg.seed = 777;
  cfg.block_size = 256;
  cfg.want_spectra = true;
  cfg.tau_cut = 0.09;
  cfg.lag_max = 0.06;
  cfg.omega = {0.0, 1.0, 2.0};
  cfg.want_fixedlo = true;
  cfg.phi = {0.0, 0.5 * constants::pi};
  cfg.window_T = 0.15;

  namespace fs = std::filesystem;
  const char* names[3] = {"var_theta.csv", "spectra.csv", "fixedlo.csv"};
  std::array<std::string, 3> ref;
  bool equal = true;
  std::uint64_t digest = 0;
  for (const int workers : {1, 4, 16}) {
    cfg.workers = workers;
    const RunResult res = run_ensemble(cfg);
    const fs::path dir = fs::temp_directory_path() / ("opo_det_w" + std::to_string(workers));
    fs::remove_all(dir);
    write_run_outputs(dir.string(), cfg, res);
    for (int i = 0; i < 3; ++i) {
      const std::string bytes = slurp(dir / names[i]);
      if (workers == 1) {
        ref[i] = bytes;
        digest ^= fnv1a64(bytes.data(), bytes.size());
      } else if (bytes != ref[i]) {
        equal = false;
      }
    }
    fs::remove_all(dir);
  }
  c.pass = equal;
  c.detail = strf("csv bytes identical for workers {1,4,16}: %s (combined digest %s)",
                  equal ? "yes" : "NO", hex64(digest).c_str());
  out.push_back(c);
}

}  // namespace

std::vector<CriterionResult> run_acceptance_group(const std::string& group) {
  std::vector<CriterionResult> out;
  bool known = false;
  if (group == "analytic" || group == "all") {
    criterion1(out);
    criterion2(out);
    known = true;
  }
  if (group == "stochastic" || group == "all") {
    criterion6(out);
    criterion8(out);
    known = true;
  }
  if (group == "fig4" || group == "all") {
    fig4_group(out);
    known = true;
  }
  if (group == "fixedlo" || group == "all") {
    criterion5(out);
    known = true;
  }
  if (group == "determinism" || group == "all") {
    criterion9(out);
    known = true;
  }
  if (!known) throw std::invalid_argument("unknown acceptance group: " + group);
  std::sort(out.begin(), out.end(),
            [](const CriterionResult& a, const CriterionResult& b) { return a.id < b.id; });
  return out;
}

void print_criteria(const std::vector<CriterionResult>& results, std::ostream& os) {
  for (const CriterionResult& r : results)
    os << "criterion " << r.id << " [" << r.name << "] " << (r.pass ? "PASS" : "FAIL") << " - "
       << r.detail << "\n";
}

bool all_pass(const std::vector<CriterionResult>& results) {
  for (const CriterionResult& r : results)
    if (!r.pass) return false;
  return true;
}

}  // namespace opo
