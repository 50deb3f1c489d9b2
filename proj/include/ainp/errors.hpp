#pragma once

#include <stdexcept>
#include <string>

namespace ainp {

/// File could not be read, written, or parsed.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Window/hop/modulation combination does not cover the signal (the overlap
/// sum vanishes somewhere), so no stable reconstruction exists.
class NotAFrameError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Gap placement constraints (guard distances, signal length) cannot be met.
class PlacementError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A gap is too long for the requested restoration window.
class GapTooLongError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// No fully-reliable context frames exist around the gaps.
class EmptyNeighborhoodError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The reference signal needed by a metric is identically zero.
class UndefinedReferenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ainp
