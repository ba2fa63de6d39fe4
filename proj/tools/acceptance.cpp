#include <iostream>

#include "ioqfr/acceptance.hpp"

// One line per acceptance criterion; exit status 0 iff all pass.
int main() {
  namespace acc = ioqfr::acceptance;
  const ioqfr::ToleranceSet tol;
  int failed = 0;
  for (const auto& suite : acc::suites()) {
    const auto r = acc::run(suite, tol);
    if (!r.pass) ++failed;
    std::cout << acc::format_line(r) << std::endl;
  }
  std::cout << (failed == 0 ? "all criteria pass" : std::to_string(failed) + " criteria fail") << std::endl;
  return failed == 0 ? 0 : 1;
}
