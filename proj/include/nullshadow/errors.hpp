#pragma once

#include <stdexcept>
#include <string>

namespace nullshadow {

/// Invalid parameters or configuration passed to a simulator entry point.
class ConfigError : public std::invalid_argument {
public:
    explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

/// A zero-norm branch (absorbed photon path, empty amplitude vector) used as a state.
class NullStateError : public std::domain_error {
public:
    NullStateError() : std::domain_error("null state") {}
};

}  // namespace nullshadow
