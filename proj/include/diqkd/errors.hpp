#pragma once

#include <stdexcept>
#include <string>

namespace diqkd {

// Thrown by operations that require the symmetric weight condition
// w(Phi-) == w(Psi+); signals that no fully symmetric basis configuration
// with S > 2 exists for the given state.
class AsymmetricState : public std::runtime_error {
public:
    explicit AsymmetricState(const std::string& what_arg) : std::runtime_error(what_arg) {}
};

// Thrown by the CHSH estimator when a required basis-pair cell was never sampled.
class EmptyCell : public std::runtime_error {
public:
    explicit EmptyCell(const std::string& what_arg) : std::runtime_error(what_arg) {}
};

// Configuration file problems: unreadable file, bad syntax, schema violations.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what_arg) : std::runtime_error(what_arg) {}
};

}  // namespace diqkd
