#pragma once

#include <stdexcept>
#include <string>

namespace quadspin {

// Target outside the leg's reachable annulus.
struct UnreachableError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Target on the hip-roll axis: alpha1 is not observable.
struct SingularError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Rank-deficient least-squares problem (collinear contacts / points).
struct DegenerateError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Iterative solver hit its cap without meeting tolerance.
struct NoConvergenceError : std::runtime_error {
  NoConvergenceError(const std::string& what, int rank = -1)
      : std::runtime_error(what), controllability_rank(rank) {}
  int controllability_rank;
};

// Fewer than two stance legs: no support diagonal to plan around.
struct DegenerateSupportError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Linearization variant evaluated at a pole of its own formula.
struct SingularLinearizationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Simulated robot left its safety envelope; carries the offending tick.
struct FallDetectedError : std::runtime_error {
  FallDetectedError(const std::string& what, long at_tick)
      : std::runtime_error(what), tick(at_tick) {}
  long tick;
};

// Log too short for the requested analysis window.
struct InsufficientDataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed or out-of-contract run configuration.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace quadspin
