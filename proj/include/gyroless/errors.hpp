#pragma once

#include <stdexcept>
#include <string>

namespace gyroless {

// Invalid user-supplied parameters or configuration (CLI exit code 1).
class ConfigError : public std::invalid_argument {
public:
    explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

// An iterative numerical routine failed (non-convergence, singular system).
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

// A request outside the supported model, e.g. an a priori bound for forced motion.
class UnsupportedError : public std::logic_error {
public:
    explicit UnsupportedError(const std::string& what) : std::logic_error(what) {}
};

// A gain certificate was queried for a quantity it does not certify,
// e.g. a basin of attraction when k <= k*.
class CertificateError : public std::domain_error {
public:
    explicit CertificateError(const std::string& what) : std::domain_error(what) {}
};

}  // namespace gyroless
