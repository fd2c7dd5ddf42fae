#include <iostream>

#include "nmrqc/acceptance.hpp"

int main() {
  nmrqc::AcceptanceOptions o;
  std::vector<nmrqc::CriterionResult> done;
  bool ok = true;
  for (int id = 1; id <= 13; ++id) {
    done.push_back(nmrqc::run_criterion(id, o));
    std::cout << nmrqc::format_result(done.back()) << std::endl;
    ok = ok && done.back().pass;
  }
  const auto last = nmrqc::final_criterion(done, o);
  std::cout << nmrqc::format_result(last) << std::endl;
  ok = ok && last.pass;
  int passed = 0;
  for (const auto& r : done) passed += r.pass;
  passed += last.pass;
  std::cout << passed << " of " << nmrqc::acceptance_count << " criteria pass" << std::endl;
  return ok ? 0 : 1;
}
