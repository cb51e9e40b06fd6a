#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace opo {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
};

// group: analytic (1,2) | stochastic (6,8) | fig4 (3,4,7) | fixedlo (5) |
//        determinism (9) | all
std::vector<CriterionResult> run_acceptance_group(const std::string& group);

void print_criteria(const std::vector<CriterionResult>& results, std::ostream& os);
bool all_pass(const std::vector<CriterionResult>& results);

}  // namespace opo
