#pragma once

#include <stdexcept>
#include <string>

namespace gmphd {

/// Malformed or out-of-range user input (files, config values, boxes).
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A covariance lost positive definiteness or a density could not be evaluated.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Caller broke an operation's precondition.
class ContractError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

} // namespace gmphd
