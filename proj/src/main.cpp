#include <CLI11.hpp>

#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "opo/acceptance.hpp"
#include "opo/analytics.hpp"
#include "opo/classical.hpp"
#include "opo/compare.hpp"
#include "opo/constants.hpp"
#include "opo/ensemble.hpp"
#include "opo/io.hpp"
#include "opo/params.hpp"

using nlohmann::json;
using namespace opo;

namespace {

void emit(const std::string& out, const std::string& text) {
  if (out.empty() || out == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(out, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + out);
  f << text;
}

std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = n > 1 ? lo + (hi - lo) * i / (n - 1) : lo;
  return v;
}

std::vector<double> logspace(double lo, double hi, int n) {
  std::vector<double> v = linspace(std::log(lo), std::log(hi), n);
  for (double& x : v) x = std::exp(x);
  return v;
}

// ---------------------------------------------------------------------------

void add_params_cmd(CLI::App& app, int& rc) {
  auto* cmd = app.add_subcommand("params", "cavity/crystal parameters -> rates, threshold, "
                                           "dimensionless numbers");
  auto p = std::make_shared<PhysicalParams>();
  cmd->add_option("--lambda-p", p->lambda_p, "pump wavelength [m]")->capture_default_str();
  cmd->add_option("--mirror-R", p->mirror_R, "mirror curvature radius [m]")->capture_default_str();
  cmd->add_option("--cavity-L", p->cavity_L, "cavity length [m]")->capture_default_str();
  cmd->add_option("--crystal-l", p->crystal_l, "crystal length [m]")->capture_default_str();
  cmd->add_option("--T-p", p->T_p, "pump mirror transmittivity")->capture_default_str();
  cmd->add_option("--T-s", p->T_s, "signal mirror transmittivity")->capture_default_str();
  cmd->add_option("--n-index", p->n_index, "refractive index")->capture_default_str();
  cmd->add_option("--chi2", p->chi2, "effective chi^(2) [m/V]")->capture_default_str();
  cmd->add_option("--power", p->P_laser, "injected pump power [W]")->capture_default_str();
  cmd->callback([p, &rc] {
    (void)rc;
    const DerivedRates r = derive_rates(*p);
    json j;
    j["physical"] = {{"lambda_p", p->lambda_p}, {"mirror_R", p->mirror_R},
                     {"cavity_L", p->cavity_L}, {"crystal_l", p->crystal_l},
                     {"T_p", p->T_p},           {"T_s", p->T_s},
                     {"n_index", p->n_index},   {"chi2", p->chi2},
                     {"P_laser", p->P_laser}};
    j["rates"] = {{"w_p", r.w_p},         {"w_s", r.w_s}, {"gamma_p", r.gamma_p},
                  {"gamma_s", r.gamma_s}, {"chi", r.chi}, {"E_p", r.E_p},
                  {"E_th", r.E_th},       {"P_th", r.P_th}};
    const DimensionlessParams q = reduce(*p);
    json d;
    d["sigma"] = q.sigma;
    d["kappa"] = q.kappa;
    d["g"] = q.g;
    d["d"] = q.d();
    if (q.sigma > 1.0) {
      d["rho"] = q.rho();
      d["D"] = q.D();
    }
    j["dimensionless"] = d;
    std::cout << j.dump(2) << "\n";
  });
}

void add_classical_cmd(CLI::App& app, int& rc) {
  auto* cmd = app.add_subcommand("classical", "mean-field steady state, stability, mode pattern");
  struct Opt {
    double sigma = 2.0, theta = 0.0, kappa = 1.0, waist = 1.0, extent = 0.0;
    int grid = 65;
    std::string pattern;
  };
  auto o = std::make_shared<Opt>();
  cmd->add_option("--sigma", o->sigma, "pump strength")->capture_default_str();
  cmd->add_option("--theta", o->theta, "pattern orientation [rad]")->capture_default_str();
  cmd->add_option("--kappa", o->kappa, "gamma_p/gamma_s")->capture_default_str();
  cmd->add_option("--pattern", o->pattern, "write signal pattern CSV to this path");
  cmd->add_option("--grid", o->grid, "pattern grid points per axis")->capture_default_str();
  cmd->add_option("--waist", o->waist, "signal waist w_s for the pattern")->capture_default_str();
  cmd->add_option("--extent", o->extent, "pattern half extent (default 2.5 w_s)");
  cmd->callback([o, &rc] {
    (void)rc;
    const SteadyState s = classical_steady_state(o->sigma, o->theta);
    const auto res = classical_residual(s, o->sigma);
    double rmax = 0;
    for (const cplx& r : res) rmax = std::max(rmax, std::abs(r));
    json j;
    j["sigma"] = o->sigma;
    j["theta"] = o->theta;
    j["steady_state"] = {{"b0", {s.b0.real(), s.b0.imag()}},
                         {"b_plus", {s.bp.real(), s.bp.imag()}},
                         {"b_minus", {s.bm.real(), s.bm.imag()}}};
    j["residual_max"] = rmax;
    json eig = json::array();
    for (const cplx& e : classical_stability_eigs(s, o->sigma, o->kappa))
      eig.push_back({e.real(), e.imag()});
    j["stability_eigenvalues"] = eig;
    if (!o->pattern.empty()) {
      const double half = o->extent > 0 ? o->extent : 2.5 * o->waist;
      j["pattern_rows"] = write_pattern_csv(o->pattern, o->sigma, o->theta, o->waist, half,
                                            o->grid);
      j["pattern_file"] = o->pattern;
    }
    std::cout << j.dump(2) << "\n";
  });
}

void add_analytic_cmd(CLI::App& app, int& rc) {
  auto* cmd = app.add_subcommand("analytic", "linearized eigensystems, diffusion law, brackets");
  struct Opt {
    double sigma = 1.4142135623730951, kappa = 1.0, g = 1e-3;
  };
  auto o = std::make_shared<Opt>();
  cmd->add_option("--sigma", o->sigma, "pump strength")->capture_default_str();
  cmd->add_option("--kappa", o->kappa, "gamma_p/gamma_s")->capture_default_str();
  cmd->add_option("--g", o->g, "noise strength")->capture_default_str();
  cmd->callback([o, &rc] {
    (void)rc;
    const double sigma = o->sigma, g = o->g, d = 0.25 * g * g;
    json j;
    j["sigma"] = sigma;
    j["kappa"] = o->kappa;
    j["g"] = g;
    j["d"] = d;
    j["rho"] = std::sqrt(sigma - 1.0);
    j["D"] = diffusion_D(sigma, g);

    const auto L = adiabatic_linear_matrix(sigma);
    json lam = json::array();
    double resid = 0;
    for (const auto& [l, w] : adiabatic_eigensystem(sigma)) {
      lam.push_back(l);
      resid = std::max(resid, (L * w - l * w).cwiseAbs().maxCoeff());
    }
    j["adiabatic_eigenvalues"] = lam;
    j["adiabatic_residual_max"] = resid;

    const auto L6 = full_linear_matrix(sigma, o->kappa);
    j["goldstone6_residual"] = (L6 * goldstone6()).cwiseAbs().maxCoeff();
    j["damped6_residual"] = (L6 * damped6() + 2.0 * damped6()).cwiseAbs().maxCoeff();

    const double Topt = optimal_detection_time(sigma, d);
    j["t_opt"] = Topt;
    j["v_opt_small_d"] = 1.0 / Topt;
    j["v_opt_exact"] = fixed_lo_spectrum_exact(sigma, d, Topt, 0.0, 0.5 * constants::pi);
    j["v_opt_db"] = to_decibels(1.0 / Topt);

    // Poisson brackets at the symmetric classical point (R+ = R- = rho, Phi = 0)
    const double rho = std::sqrt(sigma - 1.0);
    const double phi = 0.5 * constants::pi;
    const cplx bp(rho, 0.0), bm(rho, 0.0);
    const Field2 fx = [phi](cplx a, cplx b) { return xd_quadrature(a, b, phi); };
    const Field2 fy = [phi](cplx a, cplx b) {
      return xd_quadrature(a, b, phi + 0.5 * constants::pi);
    };
    const Field2 fth = [](cplx a, cplx b) { return orientation_angle(a, b); };
    json br;
    br["xx_numeric"] = poisson_bracket2(fx, fy, bp, bm);
    br["xx_closed"] = bracket_xx_closed(rho, rho);
    br["xtheta_numeric"] = poisson_bracket2(fx, fth, bp, bm);
    br["xtheta_closed"] = bracket_xtheta_closed(rho, rho, 0.0, phi);
    const Field1 sx = [](cplx b) { return 2.0 * b.real(); };
    const Field1 sy = [](cplx b) { return 2.0 * b.imag(); };
    br["single_mode_xy"] = poisson_bracket1(sx, sy, cplx(0.3, -0.2));
    j["brackets"] = br;
    std::cout << j.dump(2) << "\n";
  });
}

// ---------------------------------------------------------------------------

struct SimOpt {
  RunConfig cfg;
  std::string out_dir, manifest_path;
  double omega_max = 20.0;
  int omega_n = 0;
  std::vector<double> phi_deg;
};

void add_simulate_cmd(CLI::App& app, int& rc) {
  auto* cmd = app.add_subcommand("simulate", "run a positive-P trajectory ensemble");
  auto o = std::make_shared<SimOpt>();
  RunConfig& c = o->cfg;
  cmd->add_option("--system", c.system, "full | adiabatic | reduced")->capture_default_str();
  cmd->add_option("--sigma", c.sigma, "pump strength (> 1)")->capture_default_str();
  cmd->add_option("--kappa", c.kappa, "gamma_p/gamma_s")->capture_default_str();
  cmd->add_option("--g", c.g, "noise strength")->capture_default_str();
  cmd->add_option("--dtau", c.dtau, "time step")->capture_default_str();
  cmd->add_option("--tau-end", c.tau_end, "integration span")->capture_default_str();
  cmd->add_option("--midpoint-iters", c.midpoint_iters, "midpoint iterations")
      ->capture_default_str();
  cmd->add_option("--blowup", c.blowup, "divergence cutoff on |beta|")->capture_default_str();
  cmd->add_option("--n-traj", c.n_traj, "number of trajectories")->capture_default_str();
  cmd->add_option("--seed", c.seed, "master seed (required unless --manifest)");
  cmd->add_option("--block-size", c.block_size, "trajectories per block")->capture_default_str();
  cmd->add_option("--workers", c.workers, "worker threads (0 = hardware)")->capture_default_str();
  cmd->add_flag("--spectra", c.want_spectra, "accumulate rotating-frame spectra");
  cmd->add_option("--tau-cut", c.tau_cut, "stationary cutoff for spectra")->capture_default_str();
  cmd->add_option("--lag-max", c.lag_max, "correlation lag support")->capture_default_str();
  cmd->add_option("--omega", c.omega, "analysis frequencies (repeatable)");
  cmd->add_option("--omega-max", o->omega_max, "frequency grid upper edge")
      ->capture_default_str();
  cmd->add_option("--omega-n", o->omega_n, "frequency grid size (0 = only --omega values)");
  cmd->add_flag("--fixedlo", c.want_fixedlo, "accumulate fixed-LO windowed variances");
  cmd->add_option("--phi", c.phi, "fixed LO angles [rad] (repeatable)");
  cmd->add_option("--phi-deg", o->phi_deg, "fixed LO angles [deg] (repeatable)");
  cmd->add_option("--window-T", c.window_T, "detection window (0 = tau_end)")
      ->capture_default_str();
  cmd->add_option("--divergence-limit", c.divergence_limit, "tolerated divergent fraction")
      ->capture_default_str();
  cmd->add_option("--checkpoint", c.checkpoint_path, "checkpoint file path");
  cmd->add_option("--checkpoint-blocks", c.checkpoint_blocks, "write checkpoint every N blocks");
  cmd->add_flag("--resume", c.resume, "resume from the checkpoint file");
  cmd->add_option("--out", o->out_dir, "output directory")->required();
  cmd->add_option("--manifest", o->manifest_path, "replay the config of an existing manifest");

  cmd->callback([o, cmd, &rc] {
    RunConfig cfg = o->cfg;
    if (!o->manifest_path.empty()) {
      // replay: the recorded config wins; only execution knobs may be changed
      static const char* model_flags[] = {"--system", "--sigma", "--kappa", "--g", "--dtau",
                                          "--tau-end", "--midpoint-iters", "--blowup", "--n-traj",
                                          "--seed", "--block-size", "--spectra", "--tau-cut",
                                          "--lag-max", "--omega", "--omega-n", "--fixedlo",
                                          "--phi", "--phi-deg", "--window-T"};
      for (const char* f : model_flags)
        if (cmd->count(f))
          throw CLI::ValidationError("simulate",
                                     std::string(f) + " conflicts with --manifest replay");
      const json m = read_json_file(o->manifest_path);
      cfg = config_from_json(m.at("config"));
      if (cmd->count("--workers")) cfg.workers = o->cfg.workers;
      cfg.checkpoint_path = o->cfg.checkpoint_path;
      cfg.checkpoint_blocks = o->cfg.checkpoint_blocks;
      cfg.resume = o->cfg.resume;
      cfg.divergence_limit = o->cfg.divergence_limit;
    } else {
      if (!cmd->count("--seed"))
        throw CLI::ValidationError("simulate", "--seed is required (or use --manifest)");
      for (double pd : o->phi_deg) cfg.phi.push_back(pd * constants::pi / 180.0);
      if (o->omega_n > 0) {
        cfg.omega.clear();
        for (int i = 0; i < o->omega_n; ++i)
          cfg.omega.push_back(o->omega_n > 1 ? o->omega_max * i / (o->omega_n - 1) : 0.0);
      }
      if ((cfg.want_spectra || cfg.want_fixedlo) && cfg.omega.empty())
        for (int i = 0; i <= 40; ++i) cfg.omega.push_back(0.5 * i);
      if (cfg.want_fixedlo && cfg.phi.empty()) cfg.phi = {0.5 * constants::pi};
    }

    const RunResult res = run_ensemble(cfg);
    if (!res.complete) {
      std::cerr << "run incomplete; checkpoint written to " << cfg.checkpoint_path << "\n";
      rc = 2;
      return;
    }
    write_run_outputs(o->out_dir, cfg, res);
    const json m = read_json_file((std::filesystem::path(o->out_dir) / "manifest.json").string());
    std::cout << m.at("results").dump(2) << "\n";
    std::cerr << "wrote " << o->out_dir << " (" << res.wall_seconds << " s)\n";
    if (divergence_exceeded(cfg, res)) {
      std::cerr << "divergent fraction above limit: " << res.n_diverged << "/" << res.n_total
                << "\n";
      rc = 3;
    }
  });
}

// ---------------------------------------------------------------------------

void add_spectrum_cmd(CLI::App& app, int& rc) {
  auto* cmd = app.add_subcommand("spectrum", "stationary squeezing spectra (closed forms)");
  struct Opt {
    double sigma = 1.4142135623730951, omega_max = 20.0;
    int n = 201;
    std::string out = "-";
  };
  auto o = std::make_shared<Opt>();
  cmd->add_option("--sigma", o->sigma, "pump strength")->capture_default_str();
  cmd->add_option("--omega-max", o->omega_max, "upper frequency")->capture_default_str();
  cmd->add_option("--n", o->n, "grid size")->capture_default_str();
  cmd->add_option("--out", o->out, "output file (- = stdout)")->capture_default_str();
  cmd->callback([o, &rc] {
    (void)rc;
    std::ostringstream ss;
    ss << "omega,v_xb,v_yb,v_xd,v_yd\n";
    for (const double w : linspace(0.0, o->omega_max, o->n))
      ss << g17(w) << ',' << g17(v_out_xb(o->sigma, w)) << ',' << g17(v_out_yb(o->sigma, w))
         << ',' << g17(v_out_xd(w)) << ',' << g17(v_out_yd(w)) << '\n';
    emit(o->out, ss.str());
  });
}

struct FixedLoOpt {
  double sigma = 1.4142135623730951, d = 1e-10, g = 0.0, phi_deg = 90.0;
  double T = 0.0, omega = 0.0, min = 0.0, max = 0.0;
  int n = 101;
  bool log = false, exact = false;
  std::string axis, out = "-";
};

void add_fixedlo_cmd(CLI::App& app, int& rc) {
  auto* cmd = app.add_subcommand("fixed-lo", "windowed homodyne variance with a fixed LO");
  auto o = std::make_shared<FixedLoOpt>();
  cmd->add_option("--sigma", o->sigma, "pump strength")->capture_default_str();
  cmd->add_option("--d", o->d, "noise parameter g^2/4")->capture_default_str();
  cmd->add_option("--g", o->g, "noise strength (overrides --d)");
  cmd->add_option("--phi-deg", o->phi_deg, "LO angle [deg]")->capture_default_str();
  cmd->add_option("--T", o->T, "detection window (0 = T_opt)")->capture_default_str();
  cmd->add_option("--omega", o->omega, "analysis frequency")->capture_default_str();
  cmd->add_option("--axis", o->axis, "sweep axis: T | omega (none = print summary)");
  cmd->add_option("--min", o->min, "axis lower edge");
  cmd->add_option("--max", o->max, "axis upper edge");
  cmd->add_option("--n", o->n, "axis grid size")->capture_default_str();
  cmd->add_flag("--log", o->log, "log-spaced axis");
  cmd->add_flag("--exact", o->exact, "add exact windowed-integral columns");
  cmd->add_option("--out", o->out, "output file (- = stdout)")->capture_default_str();
  cmd->callback([o, cmd, &rc] {
    (void)rc;
    if (o->g > 0.0) o->d = 0.25 * o->g * o->g;
    const double phi = o->phi_deg * constants::pi / 180.0;
    const double Topt = optimal_detection_time(o->sigma, o->d);
    const double T = o->T > 0.0 ? o->T : Topt;

    if (o->axis.empty()) {
      json j;
      j["sigma"] = o->sigma;
      j["d"] = o->d;
      j["phi_deg"] = o->phi_deg;
      j["t_opt"] = Topt;
      j["T"] = T;
      j["omega"] = o->omega;
      const double v = fixed_lo_spectrum(o->sigma, o->d, T, o->omega, phi);
      j["v"] = v;
      j["v_db"] = to_decibels(v);
      if (o->exact) {
        const double ve = fixed_lo_spectrum_exact(o->sigma, o->d, T, o->omega, phi);
        j["v_exact"] = ve;
        j["v_exact_db"] = to_decibels(ve);
      }
      std::cout << j.dump(2) << "\n";
      return;
    }

    std::vector<double> grid;
    bool uselog = o->log;
    if (o->axis == "T") {
      double lo = o->min, hi = o->max;
      if (!cmd->count("--min")) lo = Topt / 30.0;
      if (!cmd->count("--max")) hi = 30.0 * Topt;
      if (!cmd->count("--log")) uselog = true;
      grid = uselog ? logspace(lo, hi, o->n) : linspace(lo, hi, o->n);
    } else if (o->axis == "omega") {
      const double lo = cmd->count("--min") ? o->min : 0.0;
      const double hi = cmd->count("--max") ? o->max : 10.0;
      grid = uselog ? logspace(lo, hi, o->n) : linspace(lo, hi, o->n);
    } else {
      throw CLI::ValidationError("fixed-lo", "--axis must be T or omega");
    }

    std::ostringstream ss;
    ss << o->axis << ",v,v_db" << (o->exact ? ",v_exact,v_exact_db" : "") << "\n";
    for (const double x : grid) {
      const double Ti = o->axis == "T" ? x : T;
      const double wi = o->axis == "omega" ? x : o->omega;
      const double v = fixed_lo_spectrum(o->sigma, o->d, Ti, wi, phi);
      ss << g17(x) << ',' << g17(v) << ',' << g17(to_decibels(v));
      if (o->exact) {
        const double ve = fixed_lo_spectrum_exact(o->sigma, o->d, Ti, wi, phi);
        ss << ',' << g17(ve) << ',' << g17(to_decibels(ve));
      }
      ss << '\n';
    }
    emit(o->out, ss.str());
  });
}

void add_sweep_cmd(CLI::App& app, int& rc) {
  auto* cmd = app.add_subcommand("sweep", "tabulate the fixed-LO variance along one axis");
  struct Opt {
    std::string axis, out = "-";
    double sigma = 1.4142135623730951, d = 1e-10, T = 0.0, omega = 0.0, phi_deg = 90.0;
    double min = 0.0, max = 0.0;
    int n = 101;
    bool log = false, exact = false;
  };
  auto o = std::make_shared<Opt>();
  cmd->add_option("--axis", o->axis, "phi | d | T | omega | sigma")->required();
  cmd->add_option("--min", o->min, "axis lower edge (deg for phi)")->required();
  cmd->add_option("--max", o->max, "axis upper edge (deg for phi)")->required();
  cmd->add_option("--n", o->n, "axis grid size")->capture_default_str();
  cmd->add_flag("--log", o->log, "log-spaced axis");
  cmd->add_option("--sigma", o->sigma, "pump strength")->capture_default_str();
  cmd->add_option("--d", o->d, "noise parameter g^2/4")->capture_default_str();
  cmd->add_option("--T", o->T, "detection window (0 = T_opt per point)")->capture_default_str();
  cmd->add_option("--omega", o->omega, "analysis frequency")->capture_default_str();
  cmd->add_option("--phi-deg", o->phi_deg, "LO angle [deg]")->capture_default_str();
  cmd->add_flag("--exact", o->exact, "add exact windowed-integral columns");
  cmd->add_option("--out", o->out, "output file (- = stdout)")->capture_default_str();
  cmd->callback([o, &rc] {
    (void)rc;
    const std::vector<double> grid =
        o->log ? logspace(o->min, o->max, o->n) : linspace(o->min, o->max, o->n);
    std::ostringstream ss;
    ss << o->axis << ",v,v_db" << (o->exact ? ",v_exact,v_exact_db" : "") << "\n";
    for (const double x : grid) {
      double sigma = o->sigma, d = o->d, T = o->T, omega = o->omega, phi_deg = o->phi_deg;
      if (o->axis == "phi")
        phi_deg = x;
      else if (o->axis == "d")
        d = x;
      else if (o->axis == "T")
        T = x;
      else if (o->axis == "omega")
        omega = x;
      else if (o->axis == "sigma")
        sigma = x;
      else
        throw CLI::ValidationError("sweep", "--axis must be phi, d, T, omega or sigma");
      if (T <= 0.0) T = optimal_detection_time(sigma, d);
      const double phi = phi_deg * constants::pi / 180.0;
      const double v = fixed_lo_spectrum(sigma, d, T, omega, phi);
      ss << g17(x) << ',' << g17(v) << ',' << g17(to_decibels(v));
      if (o->exact) {
        const double ve = fixed_lo_spectrum_exact(sigma, d, T, omega, phi);
        ss << ',' << g17(ve) << ',' << g17(to_decibels(ve));
      }
      ss << '\n';
    }
    emit(o->out, ss.str());
  });
}

// ---------------------------------------------------------------------------

void add_compare_cmd(CLI::App& app, int& rc) {
  auto* cmd = app.add_subcommand("compare", "score a run against the linearized theory");
  struct Opt {
    std::string run_dir, json_out;
    double z_limit = 4.0, sigma = 0.0, g = 0.0;
  };
  auto o = std::make_shared<Opt>();
  cmd->add_option("run_dir", o->run_dir, "directory written by simulate")->required();
  cmd->add_option("--z-limit", o->z_limit, "pass threshold on max |z|")->capture_default_str();
  cmd->add_option("--json", o->json_out, "also write the report as JSON");
  cmd->add_option("--sigma", o->sigma, "expected sigma (mismatch is rejected)");
  cmd->add_option("--g", o->g, "expected g (mismatch is rejected)");
  cmd->callback([o, cmd, &rc] {
    const CompareReport rep = compare_run(o->run_dir, o->z_limit);
    if (cmd->count("--sigma") && std::abs(rep.sigma - o->sigma) > 1e-12)
      throw CLI::ValidationError("compare", "sigma mismatch with the run manifest");
    if (cmd->count("--g") && std::abs(rep.g - o->g) > 1e-12)
      throw CLI::ValidationError("compare", "g mismatch with the run manifest");
    print_report(rep, std::cout);
    if (!o->json_out.empty()) write_json_file(o->json_out, report_to_json(rep));
    if (!rep.ok) rc = 2;
  });
}

void add_validate_cmd(CLI::App& app, int& rc) {
  auto* cmd = app.add_subcommand("validate", "run the acceptance suite");
  auto group = std::make_shared<std::string>("all");
  cmd->add_option("--group", *group,
                  "analytic | stochastic | fig4 | fixedlo | determinism | all")
      ->capture_default_str();
  cmd->callback([group, &rc] {
    const auto results = run_acceptance_group(*group);
    print_criteria(results, std::cout);
    if (!all_pass(results)) rc = 2;
  });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"two-mode degenerate OPO: positive-P simulation and linearized theory"};
  app.set_version_flag("--version", "opo 1.0.0");
  app.set_config("--config", "", "read options from a sectioned key=value file");
  app.require_subcommand(1);

  int rc = 0;
  add_params_cmd(app, rc);
  add_classical_cmd(app, rc);
  add_analytic_cmd(app, rc);
  add_simulate_cmd(app, rc);
  add_spectrum_cmd(app, rc);
  add_fixedlo_cmd(app, rc);
  add_sweep_cmd(app, rc);
  add_compare_cmd(app, rc);
  add_validate_cmd(app, rc);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const std::exception& e) {
    std::cerr << "opo: " << e.what() << "\n";
    return 2;
  }
  return rc;
}
