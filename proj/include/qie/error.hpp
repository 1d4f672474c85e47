#pragma once

#include <stdexcept>
#include <string>

namespace qie {

// Bad input text: quandle spec strings, link files, CSV tables.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Structurally well-formed input that violates a domain constraint
// (non-prime modulus, degenerate form, arc out of range, ...).
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A size or row-count guard tripped.
class GuardError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace qie
