#pragma once

#include <stdexcept>
#include <string>

namespace silex {

// Base class for everything thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A parameter or configuration value is invalid (bad approach name,
// train_frames >= sequence length, kind/state mismatch, ...).
class ConfigError : public Error {
public:
    using Error::Error;
};

// An input value lies outside the operation's domain (channel out of
// [0,255], bin_count = 0, non-positive variance, misaligned mask sets).
class InputDomainError : public Error {
public:
    using Error::Error;
};

// Two rasters that must agree in size do not.
class ShapeError : public Error {
public:
    using Error::Error;
};

// File system / codec failure; the message names the offending path.
class IoError : public Error {
public:
    using Error::Error;
};

// Not enough samples to fit a model (e.g. < 2 training frames).
class InsufficientDataError : public Error {
public:
    using Error::Error;
};

// An operation was called on a model in an unusable state.
class StateError : public Error {
public:
    using Error::Error;
};

} // namespace silex
