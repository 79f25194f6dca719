#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace shadowgeo {

enum class ErrorKind {
  InvalidInput,
  DegenerateSurface,
  OffSurface,
  Convergence,
  Precondition,
  DomainExit,
};

const char* to_string(ErrorKind kind) noexcept;

/// Library-wide exception. `parameter` carries the offending segment
/// parameter s for convergence failures along a segment.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message,
        std::optional<double> parameter = std::nullopt)
      : std::runtime_error(message), kind_(kind), parameter_(parameter) {}

  ErrorKind kind() const noexcept { return kind_; }
  std::optional<double> parameter() const noexcept { return parameter_; }

 private:
  ErrorKind kind_;
  std::optional<double> parameter_;
};

}  // namespace shadowgeo
