#pragma once

#include <stdexcept>
#include <string>

namespace calab {

/// Bad arguments, dimension mismatches and exceeded enumeration budgets.
/// The CLI maps these to exit code 2.
class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class BudgetExceeded : public UsageError {
public:
    using UsageError::UsageError;
};

/// A constructed object would violate its own definition (e.g. a set-cover
/// valuation whose table fill produced two different values for one bundle).
class ConstructionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace calab
