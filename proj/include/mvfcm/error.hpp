#pragma once

#include <stdexcept>
#include <string>

namespace mvfcm {

enum class ErrorKind {
    Config,     // invalid parameters or spec files
    Data,       // malformed or inconsistent input data
    Numerical,  // non-finite values or degenerate optimisation state
};

/// Base exception for the library. The kind maps onto the CLI exit code.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& what) : Error(ErrorKind::Config, what) {}
};

class DataError : public Error {
public:
    explicit DataError(const std::string& what) : Error(ErrorKind::Data, what) {}
};

class NumericalError : public Error {
public:
    explicit NumericalError(const std::string& what) : Error(ErrorKind::Numerical, what) {}
};

/// Raised when gamma == 0, where view weights no longer influence the objective.
class DegenerateGammaError : public ConfigError {
public:
    DegenerateGammaError()
        : ConfigError("gamma = 0 makes the view-weight maximisation vacuous; use 0 < gamma < 1") {}
};

}  // namespace mvfcm
