#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace conewolff::cli {

struct SelfCheck {
  std::string name;
  std::function<bool(std::string& detail)> run;
};

// Checks that hold by construction (identities, exact examples, trivial bounds).
const std::vector<SelfCheck>& self_checks();

// Runs every check, prints one line each; returns 0 when all pass, else 2.
int selftest(std::ostream& out);

}  // namespace conewolff::cli
