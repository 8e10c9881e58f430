#pragma once

#include <stdexcept>
#include <string>

namespace tripmatch {

// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad input: unknown node, malformed file, out-of-range parameter.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// A configured size cap would be exceeded.
class SizingError : public Error {
 public:
  using Error::Error;
};

// The simplex iteration cap was hit before reaching a terminal status.
class NonConvergenceError : public Error {
 public:
  using Error::Error;
};

// Experiment configuration problem; `key()` names the offending entry.
class ConfigError : public Error {
 public:
  ConfigError(std::string key, const std::string& what)
      : Error(key + ": " + what), key_(std::move(key)) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

}  // namespace tripmatch
