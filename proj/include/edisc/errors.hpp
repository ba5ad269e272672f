#pragma once

#include <stdexcept>
#include <string>

namespace edisc {

// Malformed or out-of-domain input (NaN e-values, bad CSV, kind mismatch).
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Operation is undefined for the given size, e.g. the U_2 identity at K = 1.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A brute-force routine refused an input above its hard size bound.
class SizeError : public std::length_error {
 public:
  using std::length_error::length_error;
};

// (r, j) outside the lower triangle.
class IndexError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

}  // namespace edisc
