#pragma once

#include <stdexcept>
#include <string>

namespace geoharm {

/// Malformed input file or spec string.
class parse_error : public std::runtime_error {
 public:
  explicit parse_error(const std::string& what) : std::runtime_error(what) {}
};

/// Non-finite value detected during computation (divergence, bad gradients).
class numeric_error : public std::runtime_error {
 public:
  explicit numeric_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace geoharm
