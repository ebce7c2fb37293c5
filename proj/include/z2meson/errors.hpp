#pragma once

#include <stdexcept>
#include <string>

namespace z2meson {

/// Bad command-line or config input. Maps to CLI exit code 2.
class UsageError : public std::runtime_error {
 public:
  explicit UsageError(const std::string& what) : std::runtime_error(what) {}
};

/// Thrown when a problem exceeds a configured size limit (dense eigensolver,
/// full spin statevector). Maps to CLI exit code 3.
class CapacityError : public std::runtime_error {
 public:
  explicit CapacityError(const std::string& what) : std::runtime_error(what) {}
};

/// Output could not be written. Maps to CLI exit code 4.
class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace z2meson
