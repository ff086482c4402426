#pragma once

#include <stdexcept>
#include <string>

namespace nsratio {

/// Malformed or out-of-domain input (bad profile, unknown shape id, ...).
class InputError : public std::invalid_argument {
public:
    explicit InputError(const std::string& what) : std::invalid_argument(what) {}
};

/// A numerical procedure failed (singular pencil, no convergence, missing bracket).
class ComputationError : public std::runtime_error {
public:
    explicit ComputationError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace nsratio
