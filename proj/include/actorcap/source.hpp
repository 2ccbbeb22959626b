#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace actorcap {

struct SourceLoc {
  int line = 0;
  int column = 0;
  bool operator==(const SourceLoc&) const = default;
};

std::string to_string(SourceLoc loc);

/// Syntax error with position and the set of tokens that would have been accepted.
class ParseError : public std::runtime_error {
 public:
  ParseError(SourceLoc loc, std::string message, std::vector<std::string> expected = {});

  SourceLoc loc() const { return loc_; }
  const std::vector<std::string>& expected() const { return expected_; }
  const std::string& message() const { return message_; }

 private:
  SourceLoc loc_;
  std::string message_;
  std::vector<std::string> expected_;
};

}  // namespace actorcap
