#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace dxhash {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// add_node() was called with no failed slot left to recover.
class ClusterFull : public Error {
 public:
  ClusterFull() : Error("cluster is full: no failed node to recover") {}
};

/// A lookup found no working (or nonzero-weight) node at all.
class NoWorkingNode : public Error {
 public:
  NoWorkingNode() : Error("no working node in the cluster") {}
};

class AlreadyFailed : public Error {
 public:
  explicit AlreadyFailed(std::uint64_t id)
      : Error("node " + std::to_string(id) + " is already failed") {}
};

/// scale_down() cannot fit the working nodes into the halved array.
class CapacityExceeded : public Error {
 public:
  using Error::Error;
};

/// Malformed snapshot bytes.
class FormatError : public Error {
 public:
  using Error::Error;
};

/// An internal consistency check failed.
class InvariantViolation : public Error {
 public:
  using Error::Error;
};

} // namespace dxhash
