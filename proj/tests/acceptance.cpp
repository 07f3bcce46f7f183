// Prints one PASS/FAIL line per acceptance criterion; exits nonzero if any fail.

#include <iostream>

#include "nhcl/acceptance.hpp"

int main() {
  bool ok = true;
  nhcl::acceptance::run_all([&](const nhcl::acceptance::Result& r) {
    std::cout << nhcl::acceptance::format(r) << std::endl;
    ok = ok && r.pass;
  });
  return ok ? 0 : 1;
}
