#pragma once

#include <stdexcept>
#include <string>

namespace skomap {

// Input violates a mathematical precondition (t outside the horizon, l > r,
// infinite values where finite ones are required, NaN).
class DomainError : public std::domain_error {
public:
    explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

// API misuse: mismatched grids, invalid hypotheses for a comparison check,
// malformed configuration.
class UsageError : public std::invalid_argument {
public:
    explicit UsageError(const std::string& what) : std::invalid_argument(what) {}
};

// Internal consistency failure of a solver (output outside the domain).
class SolverError : public std::runtime_error {
public:
    explicit SolverError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace skomap
