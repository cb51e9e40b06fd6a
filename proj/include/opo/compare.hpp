#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "opo/observables.hpp"

namespace opo {

struct CompareRow {
  std::string series;  // vtheta_slope | v_yd | v_xd | fixedlo
  double phi = 0;      // fixed-LO rows only
  double omega = 0;
  double sim = 0, err = 0, theory = 0;
  double z = 0;        // NaN when the closed form is not usable at this point
};

struct CompareReport {
  std::string run_dir;
  double sigma = 0, g = 0;
  std::vector<CompareRow> rows;
  bool have_yd_fit = false;
  SaturableFit yd_fit;  // Fig. 4b fit a(w/2)^2 / [b + a(w/2)^2]
  double max_abs_z = 0;
  double z_limit = 0;
  bool ok = false;
};

// Loads manifest.json + CSVs from run_dir and scores them against the
// linearized closed forms evaluated at the run's own parameters.
CompareReport compare_run(const std::string& run_dir, double z_limit);

nlohmann::json report_to_json(const CompareReport& rep);
void print_report(const CompareReport& rep, std::ostream& os);

}  // namespace opo
