#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace actorcap::cli {

enum Exit : int {
  kOk = 0,
  kTypeError = 1,
  kStuck = 2,
  kViolation = 3,
  kParseError = 4,
};

/// Runs one command. `args` excludes the program name.
int main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace actorcap::cli
