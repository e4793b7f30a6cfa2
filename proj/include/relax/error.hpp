#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace relax {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad caller input: wrong dimension, out-of-range parameter, malformed name.
class InputError : public Error {
public:
    using Error::Error;
};

/// Unknown catalog or optimizer name.
class LookupError : public InputError {
public:
    LookupError(const std::string& what, std::vector<std::string> available)
        : InputError(what), available_(std::move(available)) {}
    const std::vector<std::string>& available() const noexcept { return available_; }

private:
    std::vector<std::string> available_;
};

/// Coordinates outside the domain a potential is defined on.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Non-finite energy, force or coordinate.
class NumericalError : public Error {
public:
    NumericalError(const std::string& what, std::vector<double> coords)
        : Error(what), coords_(std::move(coords)) {}
    const std::vector<double>& coords() const noexcept { return coords_; }

private:
    std::vector<double> coords_;
};

/// A direction or tangent operation hit a zero-length vector.
class DegenerateError : public Error {
public:
    using Error::Error;
};

/// A documented precondition of an internal routine was violated.
class ContractError : public Error {
public:
    using Error::Error;
};

/// External calculator replied with something outside the line protocol.
class ProtocolError : public Error {
public:
    using Error::Error;
};

/// External calculator could not be spawned or went away mid-request.
class TransportError : public Error {
public:
    using Error::Error;
};

}  // namespace relax
