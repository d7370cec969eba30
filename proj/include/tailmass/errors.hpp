#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace tailmass {

// Exact enumeration was asked to visit more instantiations than the cap allows.
// `required` carries the full instantiation count of the offending network.
class CapExceededError : public std::runtime_error {
 public:
  CapExceededError(std::uint64_t required, std::uint64_t cap)
      : std::runtime_error("instantiation count " + std::to_string(required) +
                           " exceeds enumeration cap " + std::to_string(cap)),
        required(required),
        cap(cap) {}

  std::uint64_t required;
  std::uint64_t cap;
};

// A numerical procedure could not produce a usable result (failed bracketing,
// invalid fitted parameters, non-monotone output curve).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// File reading/writing or parsing failure.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace tailmass
