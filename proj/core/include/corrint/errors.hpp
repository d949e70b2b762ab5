#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace corrint {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Inputs live on different atom universes, or a partition is malformed.
class StructuralError : public Error {
 public:
  using Error::Error;
};

/// An operation was called outside its documented precondition.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// A block cannot be split into parts of the requested masses.
class DivisibilityError : public Error {
 public:
  DivisibilityError(const std::string& what, int block) : Error(what), block_(block) {}
  int block() const { return block_; }

 private:
  int block_;
};

/// Restriction to a set of zero mass.
class EmptyRestrictionError : public Error {
 public:
  using Error::Error;
};

/// Truncation dimension, index or dyadic level out of range.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// An enumeration would exceed the caller's cap. `count()` is the exact
/// number of objects (decimal string, it may not fit in 64 bits).
class CapacityError : public Error {
 public:
  CapacityError(const std::string& what, std::string count)
      : Error(what), count_(std::move(count)) {}
  const std::string& count() const { return count_; }

 private:
  std::string count_;
};

/// Some block admits no common value, so no measurable selection exists.
class NoSelectionError : public Error {
 public:
  using Error::Error;
};

/// Conditioning on a block of zero mass.
class DegenerateBlockError : public Error {
 public:
  using Error::Error;
};

}  // namespace corrint
