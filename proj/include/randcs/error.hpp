#ifndef RANDCS_ERROR_HPP
#define RANDCS_ERROR_HPP

#include <stdexcept>
#include <string>

namespace randcs {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidDimension : public Error {
 public:
  using Error::Error;
};

class InvalidParameter : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class EmptyInput : public Error {
 public:
  using Error::Error;
};

/// The least-squares system over the selected columns is numerically singular.
class RankDeficient : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// A fixture or CSV file does not follow the expected layout.
class FormatError : public Error {
 public:
  using Error::Error;
};

}  // namespace randcs

#endif  // RANDCS_ERROR_HPP
