#pragma once

#include <stdexcept>
#include <string>

namespace tapred {

/// Malformed or semantically invalid user input (model files, bounds, rates).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace tapred
