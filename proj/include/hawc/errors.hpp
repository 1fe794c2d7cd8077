#pragma once

#include <stdexcept>
#include <string>

namespace hawc {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad argument, malformed specification or violated precondition.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// File missing, unreadable, unwritable or malformed on disk.
class IoError : public Error {
 public:
  using Error::Error;
};

/// Non-finite loss or gradient during optimization.
class NumericError : public Error {
 public:
  using Error::Error;
};

}  // namespace hawc
