#pragma once

#include <stdexcept>
#include <string>

namespace tfvtg {

/// Malformed or inconsistent input (bad files, violated preconditions).
/// The CLI maps it to exit code 1.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Model output that could not be turned into a valid QueryPlan.
class ParseFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Network or protocol failure talking to the chat endpoint.
class TransportError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace tfvtg
