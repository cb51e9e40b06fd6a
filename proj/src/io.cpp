#include "opo/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace opo {

using nlohmann::json;

std::string g17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::uint64_t fnv1a64(const void* data, std::size_t n) {
  const auto* p = static_cast<const unsigned char*>(data);
  std::uint64_t h = 14695981039346656037ULL;
  for (std::size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= 1099511628211ULL;
  }
  return h;
}

std::uint64_t fnv1a64_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path);
  std::uint64_t h = 14695981039346656037ULL;
  char buf[65536];
  while (f.read(buf, sizeof buf) || f.gcount() > 0) {
    const std::streamsize n = f.gcount();
    for (std::streamsize i = 0; i < n; ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 1099511628211ULL;
    }
  }
  return h;
}

std::string hex64(std::uint64_t h) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream f(path, std::ios::binary);  // binary: no CRLF surprises
  if (!f) throw std::runtime_error("cannot write " + path);
  return f;
}

}  // namespace

void write_vtheta_csv(const std::string& path, const RunResult& r) {
  auto f = open_out(path);
  f << "tau,var_theta,stderr,var_over_D\n";
  const double D = r.diffusion_D;
  for (std::size_t n = 0; n < r.tau.size(); ++n)
    f << g17(r.tau[n]) << ',' << g17(r.vtheta[n]) << ',' << g17(r.vtheta_err[n]) << ','
      << g17(r.vtheta[n] / D) << '\n';
}

void write_spectra_csv(const std::string& path, const RunResult& r) {
  auto f = open_out(path);
  f << "omega,v_yd,err_yd,v_xd,err_xd\n";
  for (std::size_t i = 0; i < r.spec_yd.omega.size(); ++i)
    f << g17(r.spec_yd.omega[i]) << ',' << g17(r.spec_yd.v[i]) << ',' << g17(r.spec_yd.err[i])
      << ',' << g17(r.spec_xd.v[i]) << ',' << g17(r.spec_xd.err[i]) << '\n';
}

void write_fixedlo_csv(const std::string& path, const RunResult& r) {
  auto f = open_out(path);
  f << "phi,omega,v,err\n";
  for (const FixedLoResult& fr : r.fixedlo)
    for (std::size_t i = 0; i < fr.omega.size(); ++i)
      f << g17(fr.phi) << ',' << g17(fr.omega[i]) << ',' << g17(fr.v[i]) << ',' << g17(fr.err[i])
        << '\n';
}

const std::vector<double>& CsvTable::col(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return cols[i];
  throw std::runtime_error("csv column not found: " + name);
}

CsvTable read_csv(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path);
  CsvTable t;
  std::string line;
  if (!std::getline(f, line)) throw std::runtime_error("empty csv " + path);
  std::stringstream hs(line);
  std::string cell;
  while (std::getline(hs, cell, ',')) t.header.push_back(cell);
  t.cols.resize(t.header.size());
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    std::stringstream ls(line);
    std::size_t i = 0;
    while (std::getline(ls, cell, ',')) {
      if (i >= t.cols.size()) throw std::runtime_error("ragged csv row in " + path);
      t.cols[i++].push_back(std::strtod(cell.c_str(), nullptr));
    }
    if (i != t.cols.size()) throw std::runtime_error("ragged csv row in " + path);
  }
  return t;
}

void write_json_file(const std::string& path, const json& j) {
  auto f = open_out(path);
  f << j.dump(2) << '\n';
}

json read_json_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path);
  json j;
  f >> j;
  return j;
}

std::vector<std::string> write_run_outputs(const std::string& dir, const RunConfig& cfg,
                                           const RunResult& r) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  std::vector<std::string> files;

  write_vtheta_csv((fs::path(dir) / "var_theta.csv").string(), r);
  files.push_back("var_theta.csv");
  if (!r.spec_yd.omega.empty()) {
    write_spectra_csv((fs::path(dir) / "spectra.csv").string(), r);
    files.push_back("spectra.csv");
  }
  if (!r.fixedlo.empty()) {
    write_fixedlo_csv((fs::path(dir) / "fixedlo.csv").string(), r);
    files.push_back("fixedlo.csv");
  }

  json m;
  m["format"] = "opo-run-v1";
  m["version"] = "opo 1.0.0";
  m["config"] = config_to_json(cfg);
  m["seed_scheme"] = "seed_seq(master_seed, trajectory_index); shards are blocks of block_size";
  m["n_blocks"] = (cfg.n_traj + cfg.block_size - 1) / cfg.block_size;
  json res;
  res["n_total"] = r.n_total;
  res["wall_seconds"] = r.wall_seconds;
  res["n_diverged"] = r.n_diverged;
  res["branch_crossings"] = r.branch_crossings;
  res["wrap_jumps"] = r.wrap_jumps;
  res["max_sym_dev"] = r.max_sym_dev;
  res["diffusion_D"] = r.diffusion_D;
  res["window_T"] = r.window_T;
  json sf;
  sf["slope"] = r.vtheta_slope.slope;
  sf["intercept"] = r.vtheta_slope.intercept;
  sf["r2"] = r.vtheta_slope.r2;
  sf["slope_err"] = r.vtheta_slope.slope_err;
  res["vtheta_fit"] = sf;
  m["results"] = res;
  json outs = json::object();
  for (const std::string& name : files)
    outs[name] = hex64(fnv1a64_file((fs::path(dir) / name).string()));
  m["outputs"] = outs;
  write_json_file((fs::path(dir) / "manifest.json").string(), m);
  files.push_back("manifest.json");
  return files;
}

}  // namespace opo
