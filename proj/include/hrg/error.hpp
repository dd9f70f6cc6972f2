#pragma once

#include <stdexcept>
#include <string>

namespace hrg {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// A numeric input would leave the supported double-precision range.
class RangeError : public Error {
public:
    using Error::Error;
};

/// Reading or writing a file failed.
class IoError : public Error {
public:
    using Error::Error;
};

/// A file had the wrong magic, version or shape.
class FormatError : public IoError {
public:
    using IoError::IoError;
};

} // namespace hrg
