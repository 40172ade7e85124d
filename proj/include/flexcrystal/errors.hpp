#pragma once

#include <stdexcept>
#include <string>

namespace flexcrystal {

// Malformed numeric input: non-unit axis, zero vector, step out of range.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A geometric construction that has no well-defined answer (antipodal
// directions, collinear geodesic endpoints, vanishing chord midpoint).
class GeometryError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Q lies outside the region where the tridymite four-bar reflection exists.
class NeighborhoodError : public GeometryError {
 public:
  using GeometryError::GeometryError;
};

// Determinant sign does not match what the caller promised.
class OrientationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Edge or relation indices that do not fit the realization.
class StructuralError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(std::string path, const std::string& what)
      : std::runtime_error(path.empty() ? what : path + ": " + what),
        path_(std::move(path)) {}

  // JSON-pointer style location of the offending field, e.g. "/vertices/3/pos".
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

}  // namespace flexcrystal
