#pragma once

#include <stdexcept>
#include <string>

namespace txlab {

// Common base so the CLI can map failures to machine-readable classes and
// exit codes.
class Error : public std::runtime_error {
public:
    Error(std::string cls, const std::string& msg)
        : std::runtime_error(msg), class_(std::move(cls)) {}
    const std::string& error_class() const { return class_; }

private:
    std::string class_;
};

// Malformed or inconsistent configuration input (unknown keys, bad grids).
class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& msg) : Error("config_error", msg) {}
};

// Invalid network/device declarations (unknown labels, negative rates).
class DeclarationError : public Error {
public:
    explicit DeclarationError(const std::string& msg)
        : Error("declaration_error", msg) {}
};

// Numerical failure: unstable system, singular solve, fit non-convergence,
// non-convergent quadrature.
class NumericError : public Error {
public:
    explicit NumericError(const std::string& msg) : Error("numeric_error", msg) {}
};

// Inputs that are syntactically fine but physically inadmissible for the
// requested operation (e.g. noise referral with a closed channel).
class UnphysicalError : public Error {
public:
    explicit UnphysicalError(const std::string& msg)
        : Error("unphysical_error", msg) {}
};

class IoError : public Error {
public:
    explicit IoError(const std::string& msg) : Error("io_error", msg) {}
};

} // namespace txlab
