#pragma once

#include <stdexcept>
#include <string>

namespace permeq {

// Input text could not be parsed. `position` is 1-based where meaningful, 0 otherwise.
class ParseError : public std::runtime_error {
public:
    ParseError(std::string msg, std::size_t position = 0)
        : std::runtime_error(std::move(msg)), position_(position) {}
    std::size_t position() const { return position_; }

private:
    std::size_t position_;
};

// A caller violated a documented precondition (mismatched arities, probe sets,
// subset requirements, ...). Usage error, not an internal failure.
class PreconditionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// An exact computation was refused because it would exceed a configured ceiling.
// The message names the bound that was hit.
class BudgetError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A tester could not obtain a comparison set for the input degree. Distinct from
// a reject verdict.
class ComparisonUnavailableError : public BudgetError {
public:
    using BudgetError::BudgetError;
};

} // namespace permeq
