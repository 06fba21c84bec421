#pragma once

#include <stdexcept>
#include <string>

namespace turbbench {

// Root of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

// Filesystem failures outside image decoding (directories, manifests, logs).
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace turbbench
