#pragma once
#include <stdexcept>
#include <string>

namespace fcm {

// Base class for all library errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A parameter or configuration violates a documented range or invariant.
class ValidationError : public Error {
public:
    using Error::Error;
};

// An operation needs more past prices than the market state holds.
class InsufficientHistoryError : public Error {
public:
    using Error::Error;
};

// A statistics operation received too few observations.
class InsufficientDataError : public Error {
public:
    using Error::Error;
};

// A statistics operation requires a series with positive variance.
class ZeroVarianceError : public Error {
public:
    using Error::Error;
};

// The tail-index estimator cannot form a usable set of order statistics.
class InsufficientTailError : public Error {
public:
    using Error::Error;
};

// Config file could not be parsed; carries file location context.
class ParseError : public Error {
public:
    ParseError(const std::string& what, int line)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

class UnknownPresetError : public Error {
public:
    using Error::Error;
};

// I/O and other runtime failures surfaced by the CLI layer.
class RuntimeIoError : public Error {
public:
    using Error::Error;
};

} // namespace fcm
