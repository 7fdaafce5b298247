#pragma once

#include <stdexcept>
#include <string>

namespace greedyicl {

/// Malformed or inconsistent input data (files, edge rows, label matrices).
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

/// Invalid configuration: bad parameter values or flag combinations.
class ConfigError : public std::invalid_argument {
 public:
  explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

}  // namespace greedyicl
