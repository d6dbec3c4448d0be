#pragma once

#include <stdexcept>
#include <string>

namespace motifsp {

/// Malformed or inconsistent input data (files, records, graphs).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A 64-bit counter would have wrapped.
class CountOverflow : public std::overflow_error {
 public:
  using std::overflow_error::overflow_error;
};

/// Training produced a non-finite loss.
class DivergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace motifsp
