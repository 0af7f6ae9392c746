#pragma once

#include <stdexcept>
#include <string>

namespace percept {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid argument or configuration (bad counts, non-positive widths, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Geometry for which a factor or observation model is undefined.
class DegenerateGeometry : public Error {
 public:
  using Error::Error;
};

/// Covariance or probability vector lost its required structure.
class NumericalFailure : public Error {
 public:
  using Error::Error;
};

/// Rejection sampling could not place an entity.
class PlacementFailure : public Error {
 public:
  PlacementFailure(std::string entity_class, const std::string& what)
      : Error(what), entity_class_(std::move(entity_class)) {}
  const std::string& entity_class() const noexcept { return entity_class_; }

 private:
  std::string entity_class_;
};

}  // namespace percept
