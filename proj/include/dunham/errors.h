#pragma once

#include <stdexcept>
#include <string>

namespace dunham {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A caller violated an operation's precondition (bad index, bad count, ...).
class PreconditionError : public Error {
public:
    using Error::Error;
};

// diffpoly
class InputShapeError : public Error {
public:
    using Error::Error;
};

class BranchConsistencyError : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    ParseError(const std::string& message, std::size_t position)
        : Error(message + " (at column " + std::to_string(position + 1) + ")"),
          position_(position) {}

    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

// Numeric failures. Everything below maps to the "numeric failure" exit code.
class NumericError : public Error {
public:
    using Error::Error;
};

class UnsupportedPotentialError : public NumericError {
public:
    using NumericError::NumericError;
};

class DegeneracyError : public NumericError {
public:
    using NumericError::NumericError;
};

class ContourError : public NumericError {
public:
    using NumericError::NumericError;
};

class NodeCountError : public NumericError {
public:
    using NumericError::NumericError;
};

class BranchTrackingError : public NumericError {
public:
    using NumericError::NumericError;
};

class QuadratureError : public NumericError {
public:
    using NumericError::NumericError;
};

class NoSolutionError : public NumericError {
public:
    using NumericError::NumericError;
};

class ResolutionError : public NumericError {
public:
    using NumericError::NumericError;
};

/// A symbolic identity that must hold failed to verify.
class VerificationError : public Error {
public:
    using Error::Error;
};

}  // namespace dunham
