#pragma once

#include <stdexcept>
#include <string>

namespace cgbound {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An argument lies outside the admissible set (a > b, radius <= 0, ...).
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// Vector or matrix dimensions do not agree.
class ShapeError : public Error {
public:
    using Error::Error;
};

/// A function was evaluated outside its domain (e.g. ln of a nonpositive scale).
class DomainError : public Error {
public:
    using Error::Error;
};

/// A linear solve or factorization failed.
class NumericalError : public Error {
public:
    using Error::Error;
};

/// A configuration document is malformed. `where()` is a JSON pointer.
class ConfigError : public Error {
public:
    ConfigError(std::string where, const std::string& what)
        : Error(where + ": " + what), where_(std::move(where)) {}

    const std::string& where() const noexcept { return where_; }

private:
    std::string where_;
};

namespace detail {

inline void require_shape(bool ok, const std::string& what)
{
    if (!ok) throw ShapeError(what);
}

} // namespace detail

} // namespace cgbound
