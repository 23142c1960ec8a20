#pragma once

#include <stdexcept>
#include <string>

namespace parakl {

// Error taxonomy shared by the core and the C API. Each class maps to one
// parakl_status value at the extern-C boundary.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Malformed input: bad matrices, unknown generator names, broken JSON.
class InputError : public Error {
public:
  using Error::Error;
};

// Well-formed input that violates an operation's precondition
// (endpoint outside W^J, u not below v, ...).
class PreconditionError : public Error {
public:
  using Error::Error;
};

// A configured resource cap was exceeded (length cutoff, poset size cap).
class LimitError : public Error {
public:
  using Error::Error;
};

// An internal consistency assertion failed. Never expected.
class InternalError : public Error {
public:
  using Error::Error;
};

[[noreturn]] inline void internal_check_failed(const char* what) {
  throw InternalError(std::string("internal check failed: ") + what);
}

#define PARAKL_CHECK(cond)                                                     \
  do {                                                                         \
    if (!(cond)) ::parakl::internal_check_failed(#cond);                       \
  } while (0)

} // namespace parakl
