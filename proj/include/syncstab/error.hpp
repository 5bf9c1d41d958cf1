#pragma once

#include <stdexcept>
#include <string>

namespace syncstab {

/// Caller supplied something outside an operation's domain (CLI exit code 1).
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical procedure failed to reach its tolerance (CLI exit code 2).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace syncstab
