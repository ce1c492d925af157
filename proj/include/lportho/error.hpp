#pragma once

#include <stdexcept>
#include <string>

namespace lportho {

/// Base class of every exception thrown by the library.
class error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class invalid_argument : public error {
 public:
  using error::error;
};

/// Operand sizes or quadrature weights do not agree.
class dimension_error : public error {
 public:
  using error::error;
};

/// Components and trend of a decomposition do not add up to the source signal.
class inconsistent_decomposition : public error {
 public:
  using error::error;
};

/// A circulant has an eigenvalue that is zero to machine precision.
class preconditioner_singular : public error {
 public:
  using error::error;
};

class uncorrectable_spectrum : public error {
 public:
  using error::error;
};

/// No candidate exponent satisfied the selection criterion.
class none_found : public error {
 public:
  using error::error;
};

class parse_error : public error {
 public:
  using error::error;
};

}  // namespace lportho
