#pragma once

#include <stdexcept>
#include <string>

namespace gaussent {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed or inconsistent input (shapes, symmetry, bipartition).
class InvalidInput : public Error {
public:
    using Error::Error;
};

// Covariance matrix violating the uncertainty relation.
class UnphysicalState : public Error {
public:
    using Error::Error;
};

// Internal consistency check failed or an iteration did not converge.
class NumericalFailure : public Error {
public:
    using Error::Error;
};

// Operation not applicable to this state (e.g. no negativity, not N-SOL).
class NotApplicable : public Error {
public:
    using Error::Error;
};

} // namespace gaussent
