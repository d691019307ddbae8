#pragma once

#include <stdexcept>
#include <string>

namespace gradcons {

// Bad user input: config files, CLI arguments, malformed data files.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A run that could not complete: graph synthesis gave up, consensus did not
// terminate, iterates diverged, I/O failed.
class RuntimeFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace gradcons
