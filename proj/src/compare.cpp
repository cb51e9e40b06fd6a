#include "opo/compare.hpp"

#include <cmath>
#include <filesystem>
#include <limits>
#include <ostream>

#include <nlohmann/json.hpp>

#include "opo/analytics.hpp"
#include "opo/ensemble.hpp"
#include "opo/io.hpp"

namespace opo {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

double zscore(double sim, double theory, double err) {
  if (!(err > 0.0) || !std::isfinite(theory)) return std::numeric_limits<double>::quiet_NaN();
  return (sim - theory) / err;
}

}  // namespace

CompareReport compare_run(const std::string& run_dir, double z_limit) {
  CompareReport rep;
  rep.run_dir = run_dir;
  rep.z_limit = z_limit;

  const json m = read_json_file((fs::path(run_dir) / "manifest.json").string());
  if (m.value("format", "") != "opo-run-v1")
    throw std::runtime_error("not a run manifest: " + run_dir);
  const RunConfig cfg = config_from_json(m.at("config"));
  rep.sigma = cfg.sigma;
  rep.g = cfg.g;
  const double d = 0.25 * cfg.g * cfg.g;
  const json& res = m.at("results");

  {
    CompareRow r;
    r.series = "vtheta_slope";
    r.sim = res.at("vtheta_fit").at("slope").get<double>();
    r.err = res.at("vtheta_fit").at("slope_err").get<double>();
    r.theory = 1.0;
    r.z = zscore(r.sim, r.theory, r.err);
    rep.rows.push_back(r);
  }

  if (m.at("outputs").contains("spectra.csv")) {
    const CsvTable t = read_csv((fs::path(run_dir) / "spectra.csv").string());
    const auto& w = t.col("omega");
    const auto& vyd = t.col("v_yd");
    for (long i = 0; i < t.rows(); ++i) {
      CompareRow r;
      r.series = "v_yd";
      r.omega = w[i];
      r.sim = vyd[i];
      r.err = t.col("err_yd")[i];
      r.theory = v_out_yd(w[i]);
      r.z = zscore(r.sim, r.theory, r.err);
      rep.rows.push_back(r);
      r.series = "v_xd";
      r.sim = t.col("v_xd")[i];
      r.err = t.col("err_xd")[i];
      r.theory = v_out_xd(w[i]);
      r.z = zscore(r.sim, r.theory, r.err);
      rep.rows.push_back(r);
    }
    if (w.size() >= 3) {
      rep.yd_fit = fit_saturable(w, vyd);
      rep.have_yd_fit = true;
    }
  }

  if (m.at("outputs").contains("fixedlo.csv")) {
    const CsvTable t = read_csv((fs::path(run_dir) / "fixedlo.csv").string());
    const double T = res.at("window_T").get<double>();
    for (long i = 0; i < t.rows(); ++i) {
      CompareRow r;
      r.series = "fixedlo";
      r.phi = t.col("phi")[i];
      r.omega = t.col("omega")[i];
      r.sim = t.col("v")[i];
      r.err = t.col("err")[i];
      r.theory = fixed_lo_spectrum(cfg.sigma, d, T, r.omega, r.phi);
      r.z = zscore(r.sim, r.theory, r.err);
      rep.rows.push_back(r);
    }
  }

  rep.max_abs_z = 0.0;
  for (const CompareRow& r : rep.rows)
    if (std::isfinite(r.z)) rep.max_abs_z = std::max(rep.max_abs_z, std::abs(r.z));
  rep.ok = rep.max_abs_z <= z_limit;
  return rep;
}

json report_to_json(const CompareReport& rep) {
  json j;
  j["run_dir"] = rep.run_dir;
  j["sigma"] = rep.sigma;
  j["g"] = rep.g;
  j["z_limit"] = rep.z_limit;
  j["max_abs_z"] = rep.max_abs_z;
  j["ok"] = rep.ok;
  if (rep.have_yd_fit) {
    json f;
    f["a"] = rep.yd_fit.a;
    f["b"] = rep.yd_fit.b;
    f["rms"] = rep.yd_fit.rms;
    f["converged"] = rep.yd_fit.converged;
    j["yd_fit"] = f;
  }
  json rows = json::array();
  for (const CompareRow& r : rep.rows) {
    json e;
    e["series"] = r.series;
    if (r.series == "fixedlo") e["phi"] = r.phi;
    e["omega"] = r.omega;
    e["sim"] = r.sim;
    e["err"] = r.err;
    e["theory"] = r.theory;
    if (std::isfinite(r.z))
      e["z"] = r.z;
    else
      e["z"] = nullptr;  // closed form not applicable at this point
    rows.push_back(e);
  }
  j["rows"] = rows;
  return j;
}

void print_report(const CompareReport& rep, std::ostream& os) {
  char buf[160];
  os << "# " << rep.run_dir << "  (sigma=" << g17(rep.sigma) << ", g=" << g17(rep.g) << ")\n";
  std::snprintf(buf, sizeof buf, "%-14s %8s %8s %13s %10s %13s %8s\n", "series", "phi", "omega",
                "sim", "err", "theory", "z");
  os << buf;
  for (const CompareRow& r : rep.rows) {
    std::snprintf(buf, sizeof buf, "%-14s %8.4g %8.4g %13.6g %10.3g %13.6g %8.2f\n",
                  r.series.c_str(), r.phi, r.omega, r.sim, r.err, r.theory, r.z);
    os << buf;
  }
  if (rep.have_yd_fit) {
    std::snprintf(buf, sizeof buf, "yd fit a(w/2)^2/[b+a(w/2)^2]: a=%.6g b=%.6g rms=%.3g %s\n",
                  rep.yd_fit.a, rep.yd_fit.b, rep.yd_fit.rms,
                  rep.yd_fit.converged ? "(converged)" : "(not converged)");
    os << buf;
  }
  std::snprintf(buf, sizeof buf, "max |z| = %.3f (limit %.3f) -> %s\n", rep.max_abs_z, rep.z_limit,
                rep.ok ? "OK" : "MISMATCH");
  os << buf;
}

}  // namespace opo
