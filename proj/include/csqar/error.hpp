#pragma once

#include <stdexcept>
#include <string>

namespace csqar {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An input violates a documented precondition (bad parameters, r outside (0,1), ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// A numerical procedure failed (no convergence, step-size underflow).
class NumericalError : public Error {
public:
    using Error::Error;
};

/// A run configuration could not be parsed or validated. `path` names the offending field.
class ConfigError : public Error {
public:
    ConfigError(std::string path, const std::string& message)
        : Error(path + ": " + message), path_(std::move(path)) {}

    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

} // namespace csqar
