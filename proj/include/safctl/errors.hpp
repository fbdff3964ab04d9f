#pragma once

#include <stdexcept>
#include <string>

namespace safctl {

// Bad input files, bad arguments, inconsistent configuration. CLI exit code 2.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Numerical or model failures at runtime (rank defects, non-convergence,
// violated state invariants). CLI exit code 1.
class ModelError : public std::runtime_error {
 public:
  explicit ModelError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace safctl
