#pragma once

#include <stdexcept>
#include <string>

namespace wdrbo {

/// Caller supplied something malformed: wrong dimension, bad schedule, bad config.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A factorization or square root went somewhere it should not.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace wdrbo
