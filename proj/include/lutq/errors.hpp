#pragma once

#include <stdexcept>
#include <string>

namespace lutq {

// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Invalid configuration (bad Q-format, incompatible ratio, asymmetric split, ...).
// The CLI maps this to exit code 2.
class ConfigError : public Error {
public:
    using Error::Error;
};

// Malformed container: bad magic, unsupported tag, structural violations.
class FormatError : public Error {
public:
    using Error::Error;
};

// Truncated payload, nonzero pad bits, out-of-range codes.
class CorruptionError : public Error {
public:
    using Error::Error;
};

// Invalid data values (non-finite weights, empty tensors).
class DataError : public Error {
public:
    using Error::Error;
};

// Dimension mismatch between a model and an input vector.
class ShapeError : public Error {
public:
    using Error::Error;
};

} // namespace lutq
