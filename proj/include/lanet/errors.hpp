#pragma once

#include <stdexcept>
#include <string>

namespace lanet {

/// Malformed or invalid configuration file.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Unreadable or structurally invalid input data (CSV logs, matrices, JSON artifacts).
class InputError : public std::runtime_error {
public:
    explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

/// Query that cannot be answered: unknown variable, zero-probability or
/// zero-support evidence, malformed query text.
class QueryError : public std::runtime_error {
public:
    explicit QueryError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace lanet
