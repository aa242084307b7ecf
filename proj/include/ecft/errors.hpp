#pragma once

#include <stdexcept>
#include <string>

namespace ecft {

/// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// A distribution or test parameter is outside its valid domain.
class ParameterError : public Error {
  public:
    using Error::Error;
};

/// A function argument violates its precondition (empty sample, n = 0, ...).
class ArgumentError : public Error {
  public:
    using Error::Error;
};

/// The sample has zero spread so it cannot be standardized.
class DegenerateSampleError : public Error {
  public:
    using Error::Error;
};

/// The sample size lies outside the range a statistic supports.
class UnsupportedSizeError : public Error {
  public:
    using Error::Error;
};

/// The ECF modulus underflowed; the data is pathological for log-modulus statistics.
class UnderflowError : public Error {
  public:
    using Error::Error;
};

/// A rejection region does not match the (test, n) it is applied to, or a
/// study grid is not covered by calibration.
class ConfigurationError : public Error {
  public:
    using Error::Error;
};

/// Input text could not be parsed.
class ParseError : public Error {
  public:
    using Error::Error;
};

/// Reading or writing a file failed.
class IoError : public Error {
  public:
    using Error::Error;
};

}  // namespace ecft
