#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace discrepancy {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Non-finite entries or otherwise unusable matrix data.
class InvalidMatrix : public Error {
 public:
  using Error::Error;
};

/// Dimension mismatch between operands.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// Invalid parameters, kinds, or option combinations.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Malformed input file. Carries the 1-based line and the byte offset.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t offset)
      : Error(what + " (line " + std::to_string(line) + ", offset " + std::to_string(offset) + ")"),
        line_(line),
        offset_(offset) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t line_;
  std::size_t offset_;
};

/// A family whose aggregate Σ A_i² vanishes.
class DegenerateFamily : public Error {
 public:
  using Error::Error;
};

/// Input matrices that are required to be traceless are not.
class TraceError : public Error {
 public:
  using Error::Error;
};

/// Density matrix of numerical rank zero.
class DegenerateState : public Error {
 public:
  using Error::Error;
};

/// A starting point that does not satisfy the constraints it is meant to satisfy.
class InfeasibleInput : public Error {
 public:
  using Error::Error;
};

/// A decoding observable with spectral norm above one.
class BiasError : public Error {
 public:
  using Error::Error;
};

/// Exhaustive evaluation requested on an input that is too large.
class SizeError : public Error {
 public:
  using Error::Error;
};

/// A discrepancy witness that does not certify the claimed bound.
class WitnessError : public Error {
 public:
  using Error::Error;
};

}  // namespace discrepancy
