#pragma once

#include <stdexcept>
#include <string>

namespace corrlab {

/// Malformed input document or configuration (CLI exit code 2).
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition of a numerical operation does not hold, or the
/// computation itself failed (CLI exit code 1).
class ComputeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace corrlab
