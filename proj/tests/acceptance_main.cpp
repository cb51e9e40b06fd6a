#include <cstring>
#include <exception>
#include <iostream>
#include <string>

#include "opo/acceptance.hpp"

int main(int argc, char** argv) {
  std::string group = "all";
  for (int i = 1; i < argc; ++i)
    if (!std::strcmp(argv[i], "--group") && i + 1 < argc) group = argv[++i];
  try {
    const auto results = opo::run_acceptance_group(group);
    opo::print_criteria(results, std::cout);
    return opo::all_pass(results) ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "acceptance: " << e.what() << "\n";
    return 2;
  }
}
