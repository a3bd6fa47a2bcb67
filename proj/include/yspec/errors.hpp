#pragma once

#include <stdexcept>
#include <string>

namespace yspec {

// Failure taxonomy shared across the library.  Validation failures come from
// malformed user input, numerical failures from computations that could not be
// completed to tolerance.  The CLI maps the two groups to distinct exit codes.
enum class ErrorKind {
  // input validation
  kBadSegmentCover,  // gap/overlap in the segment list, or wrong interval ends
  kZeroSlope,        // segment with vanishing slope
  kDegenerateJoin,   // adjacent segments continue the same line
  kBadArgument,      // generic precondition violation

  // numerical
  kNoAllowablePair,  // no admissible pair of basis rotations for some segment
  kTurningPoint,     // requested quantity undefined at a turning point
  kTraceStall,       // curve tracer failed to advance
  kBranchCross,      // curve tracer could not step across a branch cut
  kDomain,           // evaluation requested outside a routine's validity region
  kBoundaryZero,     // determinant vanishes on a search-region boundary
  kNoConvergence,    // iteration exceeded its budget
  kLuBreakdown,      // factorization breakdown
  kQrStagnation,     // eigenvalue iteration exceeded its budget
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

// True for error kinds caused by bad user input rather than numerics.
inline bool is_validation_error(ErrorKind k) noexcept {
  switch (k) {
    case ErrorKind::kBadSegmentCover:
    case ErrorKind::kZeroSlope:
    case ErrorKind::kDegenerateJoin:
    case ErrorKind::kBadArgument:
      return true;
    default:
      return false;
  }
}

}  // namespace yspec
