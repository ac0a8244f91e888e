// Runs the acceptance battery and prints one verdict line per criterion.

#include <iostream>

#include "battery.hpp"

int main() {
  using namespace latticeops::battery;
  bool all_pass = true;
  const auto criteria = all_criteria();
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    auto r = run_guarded(static_cast<int>(i + 1), criteria[i]);
    std::cout << format_line(r) << std::endl;
    all_pass = all_pass && r.pass;
  }
  return all_pass ? 0 : 1;
}
