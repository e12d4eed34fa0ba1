#pragma once

#include <stdexcept>
#include <string>

namespace rcbbo {

/// Malformed design-variable spec or genome/spec mismatch.
class SpecError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid or missing configuration field. The message names the field.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the domain of a formula (e.g. non-positive f'c).
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Singular stiffness matrix or other linear-analysis failure.
class AnalysisError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Impossible footing geometry (non-positive effective width, column wider than footing).
class GeometryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Contact pressure reached the bearing-capacity asymptote.
class BearingFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace rcbbo
