#pragma once

#include <stdexcept>
#include <string>

namespace affl1 {

// Malformed or inconsistent user input (presentation, action, kernel files).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A configured size guard (ball element cap) was hit.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A computation needed a group element outside the precomputed ball.
class OutOfBallError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A mathematical invariant failed (non-CND kernel, bad boundary, ...).
class InvariantError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace affl1
