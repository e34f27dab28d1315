#pragma once

#include <stdexcept>
#include <string>

namespace bicvm {

// Error categories map to CLI exit codes: config -> 1, data -> 2,
// anything else -> 3.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

class ShapeError : public std::logic_error {
public:
    explicit ShapeError(const std::string& msg) : std::logic_error(msg) {}
};

}  // namespace bicvm
