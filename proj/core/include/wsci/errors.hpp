// core/include/wsci/errors.hpp

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef WSCI_ERRORS_HPP_
#define WSCI_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace wsci {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string &msg) : std::runtime_error(msg) {}
};

/// Dimension or layout mismatch between objects that must agree.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the valid domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Operation called in an invalid sequence (e.g. backward before forward).
class StateError : public Error {
 public:
  using Error::Error;
};

/// Inconsistent or unresolvable configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Malformed input file; carries the 1-based line number when known.
class ParseError : public Error {
 public:
  explicit ParseError(const std::string &msg, int line = 0)
      : Error(line > 0 ? msg + " (line " + std::to_string(line) + ")" : msg),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

/// Numerical procedure failed to converge or hit a degenerate instance.
class NumericalError : public Error {
 public:
  explicit NumericalError(const std::string &msg, int iterations = 0)
      : Error(msg), iterations_(iterations) {}
  int iterations() const { return iterations_; }

 private:
  int iterations_;
};

/// Synthetic data generation could not satisfy its constraints.
class GenerationError : public Error {
 public:
  using Error::Error;
};

}  // namespace wsci

#endif  // WSCI_ERRORS_HPP_
