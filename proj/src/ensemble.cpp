#include "opo/ensemble.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <thread>

#include <nlohmann/json.hpp>

#include "opo/analytics.hpp"
#include "opo/sde.hpp"

namespace opo {

using nlohmann::json;

nlohmann::json config_to_json(const RunConfig& c) {
  json j;
  j["system"] = c.system;
  j["sigma"] = c.sigma;
  j["kappa"] = c.kappa;
  j["g"] = c.g;
  j["dtau"] = c.dtau;
  j["tau_end"] = c.tau_end;
  j["midpoint_iters"] = c.midpoint_iters;
  j["blowup"] = c.blowup;
  j["n_traj"] = c.n_traj;
  j["seed"] = c.seed;
  j["block_size"] = c.block_size;
  j["workers"] = c.workers;
  j["want_spectra"] = c.want_spectra;
  j["tau_cut"] = c.tau_cut;
  j["lag_max"] = c.lag_max;
  j["omega"] = c.omega;
  j["want_fixedlo"] = c.want_fixedlo;
  j["phi"] = c.phi;
  j["window_T"] = c.window_T;
  j["divergence_limit"] = c.divergence_limit;
  return j;
}

RunConfig config_from_json(const nlohmann::json& j) {
  RunConfig c;
  c.system = j.at("system").get<std::string>();
  c.sigma = j.at("sigma").get<double>();
  c.kappa = j.at("kappa").get<double>();
  c.g = j.at("g").get<double>();
  c.dtau = j.at("dtau").get<double>();
  c.tau_end = j.at("tau_end").get<double>();
  c.midpoint_iters = j.at("midpoint_iters").get<int>();
  c.blowup = j.at("blowup").get<double>();
  c.n_traj = j.at("n_traj").get<long>();
  c.seed = j.at("seed").get<std::uint64_t>();
  c.block_size = j.at("block_size").get<long>();
  if (j.contains("workers")) c.workers = j.at("workers").get<int>();
  c.want_spectra = j.at("want_spectra").get<bool>();
  c.tau_cut = j.at("tau_cut").get<double>();
  c.lag_max = j.at("lag_max").get<double>();
  c.omega = j.at("omega").get<std::vector<double>>();
  c.want_fixedlo = j.at("want_fixedlo").get<bool>();
  c.phi = j.at("phi").get<std::vector<double>>();
  c.window_T = j.at("window_T").get<double>();
  if (j.contains("divergence_limit")) c.divergence_limit = j.at("divergence_limit").get<double>();
  return c;
}

namespace {

// Sample-grid bookkeeping shared by workers and the finalizer.
struct Grids {
  long nsteps = 0, nsamples = 0;
  long i0 = 0, M = 0, K = 0;  // stationary-spectra slice and lag support
  long nwin = 0;              // fixed-LO window samples
  bool spectra = false, fixedlo = false;
  std::vector<double> omega, phi;
};

Grids make_grids(const RunConfig& cfg) {
  Grids g;
  g.nsteps = std::lround(cfg.tau_end / cfg.dtau);
  if (g.nsteps < 1) throw std::invalid_argument("run_ensemble: tau_end/dtau < 1");
  if (std::abs(g.nsteps * cfg.dtau - cfg.tau_end) > 1e-9 * std::max(1.0, std::abs(cfg.tau_end)))
    throw std::invalid_argument("run_ensemble: tau_end must be an integer multiple of dtau");
  g.nsamples = g.nsteps + 1;
  g.spectra = cfg.want_spectra;
  g.fixedlo = cfg.want_fixedlo;
  g.omega = cfg.omega;
  g.phi = cfg.phi;
  if (g.spectra) {
    if (g.omega.empty()) throw std::invalid_argument("run_ensemble: spectra need omega grid");
    g.i0 = static_cast<long>(std::ceil(cfg.tau_cut / cfg.dtau - 1e-9));
    if (g.i0 < 0) g.i0 = 0;
    g.M = g.nsamples - g.i0;
    if (g.M < 16) throw std::invalid_argument("run_ensemble: too few stationary samples");
    g.K = std::min(std::lround(cfg.lag_max / cfg.dtau), g.M - 1);
    if (g.K < 1) throw std::invalid_argument("run_ensemble: lag_max too small");
  }
  if (g.fixedlo) {
    if (g.omega.empty() || g.phi.empty())
      throw std::invalid_argument("run_ensemble: fixed LO needs omega and phi");
    const double T = cfg.window_T > 0 ? cfg.window_T : cfg.tau_end;
    g.nwin = std::lround(T / cfg.dtau);
    if (g.nwin < 2 || g.nwin > g.nsamples)
      throw std::invalid_argument("run_ensemble: window_T outside the integration span");
  }
  return g;
}

struct BlockPartial {
  bool done = false;
  long nb = 0, diverged = 0, crossings = 0, wraps = 0;
  double sym_dev = 0.0;
  std::vector<double> th, th2;                        // nsamples
  std::vector<cplx> lag_yd, lag_xd;                   // K+1
  std::vector<cplx> mean_yd, mean_xd;                 // M
  std::vector<cplx> f_pp, f_p, f_m;                   // nphi * nomega

  void init(const Grids& g) {
    th.assign(g.nsamples, 0.0);
    th2.assign(g.nsamples, 0.0);
    if (g.spectra) {
      lag_yd.assign(g.K + 1, 0.0);
      lag_xd.assign(g.K + 1, 0.0);
      mean_yd.assign(g.M, 0.0);
      mean_xd.assign(g.M, 0.0);
    }
    if (g.fixedlo) {
      const std::size_t n = g.phi.size() * g.omega.size();
      f_pp.assign(n, 0.0);
      f_p.assign(n, 0.0);
      f_m.assign(n, 0.0);
    }
  }
};

struct WorkerScratch {
  std::vector<double> theta;
  std::vector<cplx> yd, xd, scratch;
  std::vector<std::vector<cplx>> x01;
  std::unique_ptr<LagCorrelator> corr;

  WorkerScratch(const Grids& g) {
    theta.resize(g.nsamples);
    if (g.spectra) {
      yd.resize(g.M);
      xd.resize(g.M);
      corr = std::make_unique<LagCorrelator>(g.M, g.K);
    }
    if (g.fixedlo) x01.assign(g.phi.size(), std::vector<cplx>(g.nwin));
  }
};

template <class Sys>
void process_block(const Sys& sys, const RunConfig& cfg, const Grids& gr, long b,
                   BlockPartial& part, WorkerScratch& ws) {
  part.init(gr);
  const long k0 = b * cfg.block_size;
  const long k1 = std::min(k0 + cfg.block_size, cfg.n_traj);
  for (long k = k0; k < k1; ++k) {
    TrajectoryRng rng(cfg.seed, static_cast<std::uint64_t>(k));
    double prev = 0.0;
    long wraps = 0;
    auto rec = [&](long n, const State<Sys::dim>& st) {
      const SignalView s = sys.signal(st);
      const double raw = theta_raw(s);
      const double th = (n == 0) ? raw : theta_unwrap(raw, prev);
      if (n > 0 && std::abs(th - prev) > 0.25 * constants::pi) ++wraps;
      prev = th;
      ws.theta[n] = th;
      if (gr.spectra && n >= gr.i0) {
        ws.yd[n - gr.i0] = dark_quadrature(s, th, 0.5 * constants::pi);
        ws.xd[n - gr.i0] = dark_quadrature(s, th, 0.0);
      }
      if (gr.fixedlo && n < gr.nwin) {
        for (std::size_t ip = 0; ip < gr.phi.size(); ++ip)
          ws.x01[ip][n] = dark_quadrature(s, 0.0, gr.phi[ip]);
      }
    };
    const TrajectoryStatus st = integrate_trajectory(sys, sys.steady_state(), cfg.dtau, gr.nsteps,
                                                     cfg.midpoint_iters, cfg.blowup, rng, rec);
    if (!st.ok) {
      ++part.diverged;
      continue;
    }
    ++part.nb;
    part.crossings += st.branch_crossings;
    part.wraps += wraps;
    part.sym_dev = std::max(part.sym_dev, st.sym_dev);
    for (long n = 0; n < gr.nsamples; ++n) {
      part.th[n] += ws.theta[n];
      part.th2[n] += ws.theta[n] * ws.theta[n];
    }
    if (gr.spectra) {
      ws.corr->lag_sums(ws.yd, ws.scratch);
      for (long j = 0; j <= gr.K; ++j) part.lag_yd[j] += ws.scratch[j];
      ws.corr->lag_sums(ws.xd, ws.scratch);
      for (long j = 0; j <= gr.K; ++j) part.lag_xd[j] += ws.scratch[j];
      for (long n = 0; n < gr.M; ++n) {
        part.mean_yd[n] += ws.yd[n];
        part.mean_xd[n] += ws.xd[n];
      }
    }
    if (gr.fixedlo) {
      for (std::size_t ip = 0; ip < gr.phi.size(); ++ip)
        for (std::size_t iw = 0; iw < gr.omega.size(); ++iw) {
          const auto [fp, fm] = windowed_pair(ws.x01[ip], gr.nwin, cfg.dtau, gr.omega[iw]);
          const std::size_t idx = ip * gr.omega.size() + iw;
          part.f_pp[idx] += fp * fm;
          part.f_p[idx] += fp;
          part.f_m[idx] += fm;
        }
    }
  }
  part.done = true;
}

// ---------------------------------------------------------------------------
// Checkpointing (msgpack; doubles round-trip exactly)
// ---------------------------------------------------------------------------

std::uint64_t fnv1a64_str(const std::string& s) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::uint64_t config_digest(const RunConfig& cfg) {
  json j = config_to_json(cfg);
  // workers and the failure policy may differ between the interrupted run and
  // the resuming one without changing the results
  j.erase("workers");
  j.erase("divergence_limit");
  return fnv1a64_str(j.dump());
}

json cvec_to_json(const std::vector<cplx>& v) {
  std::vector<double> flat;
  flat.reserve(2 * v.size());
  for (const cplx& z : v) {
    flat.push_back(z.real());
    flat.push_back(z.imag());
  }
  return json(flat);
}

std::vector<cplx> cvec_from_json(const json& j) {
  const auto flat = j.get<std::vector<double>>();
  std::vector<cplx> v(flat.size() / 2);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = {flat[2 * i], flat[2 * i + 1]};
  return v;
}

void write_checkpoint(const std::string& path, const RunConfig& cfg,
                      const std::vector<BlockPartial>& parts) {
  json j;
  j["digest"] = config_digest(cfg);
  j["n_blocks"] = parts.size();
  json blocks = json::object();
  for (std::size_t b = 0; b < parts.size(); ++b) {
    const BlockPartial& p = parts[b];
    if (!p.done) continue;
    json e;
    e["nb"] = p.nb;
    e["diverged"] = p.diverged;
    e["crossings"] = p.crossings;
    e["wraps"] = p.wraps;
    e["sym_dev"] = p.sym_dev;
    e["th"] = p.th;
    e["th2"] = p.th2;
    e["lag_yd"] = cvec_to_json(p.lag_yd);
    e["lag_xd"] = cvec_to_json(p.lag_xd);
    e["mean_yd"] = cvec_to_json(p.mean_yd);
    e["mean_xd"] = cvec_to_json(p.mean_xd);
    e["f_pp"] = cvec_to_json(p.f_pp);
    e["f_p"] = cvec_to_json(p.f_p);
    e["f_m"] = cvec_to_json(p.f_m);
    blocks[std::to_string(b)] = std::move(e);
  }
  j["blocks"] = std::move(blocks);
  const auto bytes = json::to_msgpack(j);
  const std::string tmp = path + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write checkpoint " + tmp);
    f.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  }
  std::filesystem::rename(tmp, path);
}

long load_checkpoint(const std::string& path, const RunConfig& cfg,
                     std::vector<BlockPartial>& parts) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot read checkpoint " + path);
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(f)),
                                  std::istreambuf_iterator<char>());
  json j = json::from_msgpack(bytes);
  if (j.at("digest").get<std::uint64_t>() != config_digest(cfg))
    throw std::runtime_error("checkpoint does not match the run configuration");
  if (j.at("n_blocks").get<std::size_t>() != parts.size())
    throw std::runtime_error("checkpoint block count mismatch");
  long loaded = 0;
  for (auto& [key, e] : j.at("blocks").items()) {
    const std::size_t b = std::stoul(key);
    BlockPartial& p = parts.at(b);
    p.nb = e.at("nb").get<long>();
    p.diverged = e.at("diverged").get<long>();
    p.crossings = e.at("crossings").get<long>();
    p.wraps = e.at("wraps").get<long>();
    p.sym_dev = e.at("sym_dev").get<double>();
    p.th = e.at("th").get<std::vector<double>>();
    p.th2 = e.at("th2").get<std::vector<double>>();
    p.lag_yd = cvec_from_json(e.at("lag_yd"));
    p.lag_xd = cvec_from_json(e.at("lag_xd"));
    p.mean_yd = cvec_from_json(e.at("mean_yd"));
    p.mean_xd = cvec_from_json(e.at("mean_xd"));
    p.f_pp = cvec_from_json(e.at("f_pp"));
    p.f_p = cvec_from_json(e.at("f_p"));
    p.f_m = cvec_from_json(e.at("f_m"));
    p.done = true;
    ++loaded;
  }
  return loaded;
}

// ---------------------------------------------------------------------------
// Finalization
// ---------------------------------------------------------------------------

struct Totals {
  long NT = 0;
  std::vector<double> th, th2;
  std::vector<cplx> lag_yd, lag_xd, mean_yd, mean_xd, f_pp, f_p, f_m;
};

Totals merge_parts(const Grids& gr, const std::vector<BlockPartial>& parts) {
  Totals t;
  t.th.assign(gr.nsamples, 0.0);
  t.th2.assign(gr.nsamples, 0.0);
  if (gr.spectra) {
    t.lag_yd.assign(gr.K + 1, 0.0);
    t.lag_xd.assign(gr.K + 1, 0.0);
    t.mean_yd.assign(gr.M, 0.0);
    t.mean_xd.assign(gr.M, 0.0);
  }
  if (gr.fixedlo) {
    const std::size_t n = gr.phi.size() * gr.omega.size();
    t.f_pp.assign(n, 0.0);
    t.f_p.assign(n, 0.0);
    t.f_m.assign(n, 0.0);
  }
  for (const BlockPartial& p : parts) {  // ascending block order: deterministic
    t.NT += p.nb;
    for (long n = 0; n < gr.nsamples; ++n) {
      t.th[n] += p.th[n];
      t.th2[n] += p.th2[n];
    }
    if (gr.spectra) {
      for (long k = 0; k <= gr.K; ++k) {
        t.lag_yd[k] += p.lag_yd[k];
        t.lag_xd[k] += p.lag_xd[k];
      }
      for (long n = 0; n < gr.M; ++n) {
        t.mean_yd[n] += p.mean_yd[n];
        t.mean_xd[n] += p.mean_xd[n];
      }
    }
    if (gr.fixedlo)
      for (std::size_t i = 0; i < t.f_pp.size(); ++i) {
        t.f_pp[i] += p.f_pp[i];
        t.f_p[i] += p.f_p[i];
        t.f_m[i] += p.f_m[i];
      }
  }
  return t;
}

// Spectrum from summed lag products minus the ensemble-mean contribution.
std::vector<double> spectrum_from_sums(const Grids& gr, double dtau, double g, long NT,
                                       const std::vector<cplx>& lag, const std::vector<cplx>& mean,
                                       LagCorrelator& corr, std::vector<cplx>& scratch) {
  std::vector<cplx> mu(gr.M);
  const double inv = 1.0 / static_cast<double>(NT);
  for (long n = 0; n < gr.M; ++n) mu[n] = mean[n] * inv;
  corr.lag_sums(mu, scratch);
  std::vector<double> R(gr.K + 1);
  for (long k = 0; k <= gr.K; ++k) {
    const double cnt = static_cast<double>(gr.M - k);
    R[k] = (lag[k].real() * inv - scratch[k].real()) / cnt;
  }
  std::vector<double> v(gr.omega.size());
  const double pref = 2.0 / (g * g) * dtau;
  for (std::size_t iw = 0; iw < gr.omega.size(); ++iw) {
    const double w = gr.omega[iw];
    double s = R[0];
    for (long k = 1; k <= gr.K; ++k) s += 2.0 * R[k] * std::cos(w * k * dtau);
    v[iw] = 1.0 + pref * s;
  }
  return v;
}

std::vector<double> vtheta_from_sums(const Grids& gr, long NT, const std::vector<double>& th,
                                     const std::vector<double>& th2) {
  std::vector<double> v(gr.nsamples);
  const double inv = 1.0 / static_cast<double>(NT);
  for (long n = 0; n < gr.nsamples; ++n) {
    const double m = th[n] * inv;
    v[n] = th2[n] * inv - m * m;
  }
  return v;
}

std::vector<double> fixedlo_from_sums(const Grids& gr, double dtau, double g, long NT,
                                      const Totals& t) {
  const double T_eff = static_cast<double>(gr.nwin) * dtau;
  const double pref = 2.0 / (g * g * T_eff);
  const double inv = 1.0 / static_cast<double>(NT);
  std::vector<double> v(t.f_pp.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    const cplx covar = t.f_pp[i] * inv - (t.f_p[i] * inv) * (t.f_m[i] * inv);
    v[i] = 1.0 + pref * covar.real();
  }
  return v;
}

}  // namespace

bool divergence_exceeded(const RunConfig& cfg, const RunResult& res) {
  if (res.n_total <= 0) return true;
  return static_cast<double>(res.n_diverged) >
         cfg.divergence_limit * static_cast<double>(res.n_total);
}

namespace {

template <class Sys>
RunResult run_impl(const Sys& sys, const RunConfig& cfg) {
  const auto t_start = std::chrono::steady_clock::now();
  const auto elapsed = [&t_start] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  };
  const Grids gr = make_grids(cfg);
  const long nblocks = (cfg.n_traj + cfg.block_size - 1) / cfg.block_size;
  std::vector<BlockPartial> parts(nblocks);

  if (cfg.resume && !cfg.checkpoint_path.empty() &&
      std::filesystem::exists(cfg.checkpoint_path)) {
    load_checkpoint(cfg.checkpoint_path, cfg, parts);
  }

  std::atomic<long> claim{0};
  std::atomic<long> fresh{0};  // newly processed blocks (stop_after_blocks hook)
  std::atomic<long> completed{0};
  std::mutex publish;
  long next_ckpt = cfg.checkpoint_blocks;

  auto worker = [&]() {
    WorkerScratch ws(gr);
    for (;;) {
      const long b = claim.fetch_add(1);
      if (b >= nblocks) break;
      if (parts[b].done) continue;
      if (cfg.stop_after_blocks > 0 && fresh.fetch_add(1) >= cfg.stop_after_blocks) break;
      BlockPartial part;
      process_block(sys, cfg, gr, b, part, ws);
      std::lock_guard<std::mutex> lock(publish);
      parts[b] = std::move(part);
      const long c = completed.fetch_add(1) + 1;
      if (!cfg.checkpoint_path.empty() && cfg.checkpoint_blocks > 0 && c >= next_ckpt) {
        next_ckpt += cfg.checkpoint_blocks;
        write_checkpoint(cfg.checkpoint_path, cfg, parts);
      }
    }
  };

  int nworkers = cfg.workers > 0 ? cfg.workers
                                 : static_cast<int>(std::thread::hardware_concurrency());
  if (nworkers < 1) nworkers = 1;
  if (nworkers > nblocks) nworkers = static_cast<int>(nblocks);
  std::vector<std::thread> pool;
  pool.reserve(nworkers);
  for (int i = 0; i < nworkers; ++i) pool.emplace_back(worker);
  for (auto& th : pool) th.join();

  RunResult res;
  res.dtau = cfg.dtau;
  res.g = cfg.g;
  bool all_done = true;
  for (const auto& p : parts) all_done = all_done && p.done;
  if (!all_done) {
    if (!cfg.checkpoint_path.empty()) write_checkpoint(cfg.checkpoint_path, cfg, parts);
    res.complete = false;
    res.wall_seconds = elapsed();
    return res;
  }
  res.complete = true;

  const Totals tot = merge_parts(gr, parts);
  res.n_total = cfg.n_traj;
  for (const auto& p : parts) {
    res.n_diverged += p.diverged;
    res.branch_crossings += p.crossings;
    res.wrap_jumps += p.wraps;
    res.max_sym_dev = std::max(res.max_sym_dev, p.sym_dev);
  }
  res.wall_seconds = elapsed();
  if (tot.NT == 0) return res;
  const double invNT = 1.0 / static_cast<double>(tot.NT);

  // ---- orientation variance + slope of V/D against tau
  res.tau.resize(gr.nsamples);
  for (long n = 0; n < gr.nsamples; ++n) res.tau[n] = n * cfg.dtau;
  res.vtheta = vtheta_from_sums(gr, tot.NT, tot.th, tot.th2);
  res.diffusion_D = diffusion_D(cfg.sigma, cfg.g);

  // leave-one-block-out replicas
  std::vector<std::vector<double>> loo_v(parts.size());
  std::vector<double> loo_slope(parts.size());
  std::vector<double> vd(gr.nsamples);
  for (long n = 0; n < gr.nsamples; ++n) vd[n] = res.vtheta[n] / res.diffusion_D;
  const LinearFit lf = fit_linear(res.tau, vd);
  for (std::size_t b = 0; b < parts.size(); ++b) {
    const long NTb = tot.NT - parts[b].nb;
    std::vector<double> th(gr.nsamples), th2(gr.nsamples);
    for (long n = 0; n < gr.nsamples; ++n) {
      th[n] = tot.th[n] - parts[b].th[n];
      th2[n] = tot.th2[n] - parts[b].th2[n];
    }
    loo_v[b] = vtheta_from_sums(gr, NTb, th, th2);
    std::vector<double> vdb(gr.nsamples);
    for (long n = 0; n < gr.nsamples; ++n) vdb[n] = loo_v[b][n] / res.diffusion_D;
    loo_slope[b] = fit_linear(res.tau, vdb).slope;
  }
  res.vtheta_err.assign(gr.nsamples, 0.0);
  {
    std::vector<double> tmp(parts.size());
    for (long n = 0; n < gr.nsamples; ++n) {
      for (std::size_t b = 0; b < parts.size(); ++b) tmp[b] = loo_v[b][n];
      res.vtheta_err[n] = jackknife_sigma(tmp);
    }
  }
  res.vtheta_slope.slope = lf.slope;
  res.vtheta_slope.intercept = lf.intercept;
  res.vtheta_slope.r2 = lf.r2;
  res.vtheta_slope.slope_err = jackknife_sigma(loo_slope);

  // ---- stationary rotating-frame spectra
  if (gr.spectra) {
    LagCorrelator corr(gr.M, gr.K);
    std::vector<cplx> scratch;
    res.spec_yd.omega = gr.omega;
    res.spec_xd.omega = gr.omega;
    res.spec_yd.v = spectrum_from_sums(gr, cfg.dtau, cfg.g, tot.NT, tot.lag_yd, tot.mean_yd, corr,
                                       scratch);
    res.spec_xd.v = spectrum_from_sums(gr, cfg.dtau, cfg.g, tot.NT, tot.lag_xd, tot.mean_xd, corr,
                                       scratch);
    std::vector<std::vector<double>> loo_yd(parts.size()), loo_xd(parts.size());
    for (std::size_t b = 0; b < parts.size(); ++b) {
      const long NTb = tot.NT - parts[b].nb;
      std::vector<cplx> lag(gr.K + 1), mean(gr.M);
      for (long k = 0; k <= gr.K; ++k) lag[k] = tot.lag_yd[k] - parts[b].lag_yd[k];
      for (long n = 0; n < gr.M; ++n) mean[n] = tot.mean_yd[n] - parts[b].mean_yd[n];
      loo_yd[b] = spectrum_from_sums(gr, cfg.dtau, cfg.g, NTb, lag, mean, corr, scratch);
      for (long k = 0; k <= gr.K; ++k) lag[k] = tot.lag_xd[k] - parts[b].lag_xd[k];
      for (long n = 0; n < gr.M; ++n) mean[n] = tot.mean_xd[n] - parts[b].mean_xd[n];
      loo_xd[b] = spectrum_from_sums(gr, cfg.dtau, cfg.g, NTb, lag, mean, corr, scratch);
    }
    res.spec_yd.err.resize(gr.omega.size());
    res.spec_xd.err.resize(gr.omega.size());
    std::vector<double> tmp(parts.size());
    for (std::size_t iw = 0; iw < gr.omega.size(); ++iw) {
      for (std::size_t b = 0; b < parts.size(); ++b) tmp[b] = loo_yd[b][iw];
      res.spec_yd.err[iw] = jackknife_sigma(tmp);
      for (std::size_t b = 0; b < parts.size(); ++b) tmp[b] = loo_xd[b][iw];
      res.spec_xd.err[iw] = jackknife_sigma(tmp);
    }
  }

  // ---- fixed-LO windowed variances
  if (gr.fixedlo) {
    res.window_T = static_cast<double>(gr.nwin) * cfg.dtau;
    const std::vector<double> v = fixedlo_from_sums(gr, cfg.dtau, cfg.g, tot.NT, tot);
    std::vector<std::vector<double>> loo(parts.size());
    for (std::size_t b = 0; b < parts.size(); ++b) {
      Totals tb;
      tb.f_pp.resize(tot.f_pp.size());
      tb.f_p.resize(tot.f_p.size());
      tb.f_m.resize(tot.f_m.size());
      for (std::size_t i = 0; i < tot.f_pp.size(); ++i) {
        tb.f_pp[i] = tot.f_pp[i] - parts[b].f_pp[i];
        tb.f_p[i] = tot.f_p[i] - parts[b].f_p[i];
        tb.f_m[i] = tot.f_m[i] - parts[b].f_m[i];
      }
      loo[b] = fixedlo_from_sums(gr, cfg.dtau, cfg.g, tot.NT - parts[b].nb, tb);
    }
    res.fixedlo.resize(gr.phi.size());
    std::vector<double> tmp(parts.size());
    for (std::size_t ip = 0; ip < gr.phi.size(); ++ip) {
      FixedLoResult& fr = res.fixedlo[ip];
      fr.phi = gr.phi[ip];
      fr.omega = gr.omega;
      fr.v.resize(gr.omega.size());
      fr.err.resize(gr.omega.size());
      for (std::size_t iw = 0; iw < gr.omega.size(); ++iw) {
        const std::size_t idx = ip * gr.omega.size() + iw;
        fr.v[iw] = v[idx];
        for (std::size_t b = 0; b < parts.size(); ++b) tmp[b] = loo[b][idx];
        fr.err[iw] = jackknife_sigma(tmp);
      }
    }
  }
  (void)invNT;
  res.wall_seconds = elapsed();
  return res;
}

}  // namespace

RunResult run_ensemble(const RunConfig& cfg) {
  if (cfg.sigma <= 1.0)
    throw std::invalid_argument("run_ensemble: needs sigma > 1 (above-threshold start)");
  if (cfg.n_traj < 1 || cfg.block_size < 1) throw std::invalid_argument("run_ensemble: bad sizes");
  switch (parse_system_kind(cfg.system)) {
    case SystemKind::full:
      return run_impl(Full6{cfg.sigma, cfg.kappa, cfg.g}, cfg);
    case SystemKind::adiabatic:
      return run_impl(Adiabatic4{cfg.sigma, cfg.g}, cfg);
    case SystemKind::reduced:
      return run_impl(Reduced4{cfg.sigma, cfg.kappa, cfg.g}, cfg);
  }
  throw std::logic_error("run_ensemble: unreachable");
}

}  // namespace opo
