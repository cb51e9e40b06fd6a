#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "opo/observables.hpp"

namespace opo {

struct RunConfig {
  // model
  std::string system = "full";  // full | adiabatic | reduced
  double sigma = 1.4142135623730951;
  double kappa = 1.0;
  double g = 1e-3;
  // integration
  double dtau = 3e-3;
  double tau_end = 30.0;
  int midpoint_iters = 2;
  double blowup = 1e6;
  // ensemble
  long n_traj = 20000;
  std::uint64_t seed = 0;
  long block_size = 256;
  int workers = 0;  // 0 -> hardware concurrency
  // orientation variance is always accumulated; the rest is opt-in
  bool want_spectra = false;
  double tau_cut = 10.0;  // discard tau < tau_cut as non-stationary
  double lag_max = 5.0;   // correlation support kept in the spectra
  std::vector<double> omega;  // analysis frequencies (spectra and fixed LO)
  bool want_fixedlo = false;
  std::vector<double> phi;  // fixed LO angles [rad]
  double window_T = 0.0;    // detection window; 0 -> tau_end
  // failure policy
  double divergence_limit = 1e-3;  // max tolerated divergent fraction
  // checkpointing
  std::string checkpoint_path;  // empty -> no checkpointing
  long checkpoint_blocks = 0;   // write every N completed blocks
  bool resume = false;          // load checkpoint_path before running
  long stop_after_blocks = 0;   // debugging/testing hook: claim at most N blocks
};

nlohmann::json config_to_json(const RunConfig& cfg);
RunConfig config_from_json(const nlohmann::json& j);

struct SlopeFit {
  double slope = 0, intercept = 0, r2 = 0, slope_err = 0;
};

struct SpectrumResult {
  std::vector<double> omega, v, err;
};

struct FixedLoResult {
  double phi = 0;
  std::vector<double> omega, v, err;
};

struct RunResult {
  bool complete = false;
  // orientation variance on the tau grid
  std::vector<double> tau, vtheta, vtheta_err;
  SlopeFit vtheta_slope;  // fit of vtheta/(D tau): slope of vtheta/D against tau
  double diffusion_D = 0;
  // rotating-frame stationary spectra (phase and amplitude dark quadratures)
  SpectrumResult spec_yd, spec_xd;
  // fixed-LO windowed variances, one entry per configured phi
  std::vector<FixedLoResult> fixedlo;
  // diagnostics
  long n_total = 0, n_diverged = 0;
  long branch_crossings = 0, wrap_jumps = 0;
  double max_sym_dev = 0.0;
  double dtau = 0, window_T = 0, g = 0;
  double wall_seconds = 0;
};

// Runs the ensemble.  Deterministic: the outputs are a pure function of the
// config (including seed) and are bit-identical for any worker count and for
// any checkpoint/resume split at block granularity.
RunResult run_ensemble(const RunConfig& cfg);

// Fraction-based failure test used for the process exit policy.
bool divergence_exceeded(const RunConfig& cfg, const RunResult& res);

}  // namespace opo
