#pragma once

#include <stdexcept>
#include <string>

namespace fqcsim {

/// Invalid physical parameters or configuration.
class ConfigError : public std::invalid_argument {
public:
    explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

/// A numerical routine failed (eigensolver, quadrature domain, fit).
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

/// Reading or writing an output or config file failed.
class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace fqcsim
