#pragma once

#include <stdexcept>
#include <string>

namespace hkit {

// Base class for every failure the toolkit can signal. The CLI maps any
// Error to exit code 2 (configuration / numerical error).
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class NotSymmetric : public Error {
public:
    explicit NotSymmetric(const std::string& what) : Error(what) {}
};

class NoConvergence : public Error {
public:
    explicit NoConvergence(const std::string& what) : Error(what) {}
};

class SingularMatrix : public Error {
public:
    explicit SingularMatrix(const std::string& what) : Error(what) {}
};

class QuadratureDiverged : public Error {
public:
    explicit QuadratureDiverged(const std::string& what) : Error(what) {}
};

class TooMuchSkippedMass : public Error {
public:
    explicit TooMuchSkippedMass(const std::string& what) : Error(what) {}
};

class SpectralIdentityViolated : public Error {
public:
    explicit SpectralIdentityViolated(const std::string& what) : Error(what) {}
};

class BallOutsideBox : public Error {
public:
    explicit BallOutsideBox(const std::string& what) : Error(what) {}
};

class NonPowerOfTwo : public Error {
public:
    explicit NonPowerOfTwo(const std::string& what) : Error(what) {}
};

class ConfigInvalid : public Error {
public:
    explicit ConfigInvalid(const std::string& what) : Error(what) {}
};

// Misused API (bad dimension, non-finite input, ...), as opposed to one of
// the named numerical failure conditions above.
class InvalidArgument : public Error {
public:
    explicit InvalidArgument(const std::string& what) : Error(what) {}
};

} // namespace hkit
