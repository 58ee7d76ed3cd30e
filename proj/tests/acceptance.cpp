// Acceptance runner: one PASS/FAIL line per criterion 1-11.
//   acceptance                 all criteria, exit 0 iff all pass
//   acceptance --criterion N   only criterion N

#include <cstdlib>
#include <cstring>
#include <iostream>
#include <map>
#include <string>

#include "fibertor/verify.hpp"

using namespace fibertor;

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) {
      only = std::atoi(argv[++i]);
    } else {
      std::cerr << "usage: acceptance [--criterion N]\n";
      return 2;
    }
  }
  if (only < 0 || only > 11) {
    std::cerr << "criterion must be in 1..11\n";
    return 2;
  }

  const VerifyOptions opt;
  std::map<int, std::vector<CheckResult>> by_criterion;
  for (const auto& spec : acceptance_checks())
    if (only == 0 || spec.criterion == only) by_criterion[spec.criterion].push_back(run_check(spec, opt));

  bool all = true;
  for (const auto& [criterion, results] : by_criterion) {
    bool pass = true;
    std::string ids, detail;
    for (const auto& r : results) {
      pass = pass && r.pass;
      ids += (ids.empty() ? "" : "+") + r.id;
      detail += (detail.empty() ? "" : " | ") + r.detail;
    }
    all = all && pass;
    std::cout << "criterion " << criterion << ": " << (pass ? "PASS" : "FAIL") << " " << ids << " -- " << detail
              << "\n";
  }
  return all ? 0 : 1;
}
