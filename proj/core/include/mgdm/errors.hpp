#pragma once

#include <stdexcept>
#include <string>

namespace mgdm {

/// Precondition or argument violation (bad dimensions, invalid config, ...).
class invalid_input : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An iterative routine failed to converge within its iteration cap.
class numerical_failure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A factorization hit a pivot below the singularity threshold.
class singular_matrix : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// CSV schema problems: missing columns, non-numeric response, constant columns.
class schema_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A pipeline stage produced or received zero usable rows.
class empty_data : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Filesystem failures while reading inputs or writing outputs.
class io_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace mgdm
