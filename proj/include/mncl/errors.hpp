#pragma once

#include <stdexcept>
#include <string>

namespace mncl {

// Invalid user-supplied parameter (CLI exit status 1).
class ParameterError : public std::invalid_argument {
public:
    explicit ParameterError(const std::string& what) : std::invalid_argument(what) {}
};

// Numerical breakdown: failed factorization, non-converged eigensolver (exit status 2).
class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

// Internal API misuse, e.g. mismatched dimensions or a malformed pair set.
class ContractError : public std::logic_error {
public:
    explicit ContractError(const std::string& what) : std::logic_error(what) {}
};

} // namespace mncl
