#pragma once

#include <stdexcept>
#include <string>

namespace hsplab {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Full enumeration would exceed the cap; caller should switch to sampling.
struct FeasibilityError : Error {
  using Error::Error;
};

// Numerical pathology in the randomized irrep construction; the contract is
// to retry with a new seed.
struct DecompositionError : Error {
  using Error::Error;
};

}  // namespace hsplab
