#pragma once

#include <stdexcept>
#include <string>

namespace affdim {

// Invalid inputs or violated mathematical preconditions (CLI exit code 2).
class DomainError : public std::runtime_error {
public:
    explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

// Solver breakdown or non-convergence (CLI exit code 3).
class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace affdim
