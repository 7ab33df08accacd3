#pragma once

#include <stdexcept>
#include <string>

namespace soergel {

/*
  Error taxonomy. Every failure that reflects a mathematical precondition
  (rather than a programming bug) gets its own type so callers and the CLI
  can report it precisely. Assertion-style invariant violations throw
  InternalError and should be treated as bugs.
*/

struct SoergelError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// field cannot express a required Cartan entry (e.g. cos(pi/5) over Q)
struct InexpressibleCosine : SoergelError { using SoergelError::SoergelError; };

// operation undefined in this characteristic (p = 2, reduction with p | denominator, ...)
struct BadCharacteristic : SoergelError { using SoergelError::SoergelError; };

// radical algorithm outside its validity range (characteristic too small)
struct RadicalFailure : SoergelError { using SoergelError::SoergelError; };

// matrix data fails d.d = 0 / chain-map equations where an honest complex or map is required
struct NotChainMap : SoergelError { using SoergelError::SoergelError; };

// preimage problem for a module map has no solution over the bimodule category
struct NoLift : SoergelError { using SoergelError::SoergelError; };

// element expected in the augmentation ideal has a constant term
struct NotInAugmentation : SoergelError { using SoergelError::SoergelError; };

// graded-free structure of a Hom space fails its Hilbert-series verification
struct FreenessMismatch : SoergelError { using SoergelError::SoergelError; };

// a verification witness could not be produced (isomorphism/homotopy search failed)
struct WitnessFailure : SoergelError { using SoergelError::SoergelError; };

// complex admits no standard/costandard filtration
struct NotFiltered : SoergelError { using SoergelError::SoergelError; };

// malformed configuration / CLI input (exit code 2 surface)
struct ConfigError : SoergelError { using SoergelError::SoergelError; };

struct InternalError : SoergelError { using SoergelError::SoergelError; };

inline void check(bool cond, const char* msg) {
  if (!cond) throw InternalError(std::string("invariant violated: ") + msg);
}

} // namespace soergel
