#pragma once

#include <stdexcept>
#include <string>

namespace bilap {

// Precondition violations on mathematical inputs (n < 5, s = 1, r outside
// the admissible interval, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Malformed user input; the CLI maps it to exit code 2.
class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

}  // namespace bilap
