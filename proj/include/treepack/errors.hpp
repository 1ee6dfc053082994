#pragma once

#include <stdexcept>
#include <string>

namespace treepack {

// Base of every error raised by the library. The CLI maps each subclass to a
// distinct exit status.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input outside an operation's domain (bad values, violated preconditions).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Sequences or matrices whose lengths do not line up.
class DimensionError : public DomainError {
 public:
  using DomainError::DomainError;
};

// Edge sets that do not form a tree.
class StructureError : public DomainError {
 public:
  using DomainError::DomainError;
};

// Valid input that provably has no solution.
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

// An enumeration guard was exceeded.
class ResourceError : public Error {
 public:
  using Error::Error;
};

// A packer produced an object that fails its own postcondition check.
class InternalError : public Error {
 public:
  using Error::Error;
};

}  // namespace treepack
