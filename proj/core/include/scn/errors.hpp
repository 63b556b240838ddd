#pragma once

#include <stdexcept>

namespace scn {

/// Operand shapes do not line up (matrix dims, parameter/gradient sizes).
class ShapeError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A value is outside its documented domain (ratio >= 1, gamma outside [0,1], ...).
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A computation produced or received a non-finite value.
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An operation was called in the wrong order (backward before forward).
class StateError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// A file failed to parse; the message names the offending record.
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Filesystem-level failure (cannot open/write a path).
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace scn
