#pragma once

#include <stdexcept>
#include <string>

namespace rowreorder {

/// Malformed or truncated input (columnar file, CSV). `section()` names the
/// part of the input that failed to parse.
class FormatError : public std::runtime_error {
 public:
  FormatError(std::string section, const std::string& what)
      : std::runtime_error(section + ": " + what), section_(std::move(section)) {}

  const std::string& section() const noexcept { return section_; }

 private:
  std::string section_;
};

/// An O(n^2) heuristic was asked to process a table above its row limit.
class HeuristicGateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// I/O failure while spilling sorted runs to disk.
class SpillError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace rowreorder
