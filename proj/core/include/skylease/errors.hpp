#pragma once

#include <stdexcept>
#include <string>

namespace skylease {

// Invalid scenario/config input; the message names the offending field.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

// Allocation cannot be satisfied (no reachable relay, negative post-flight
// energy, too many UAVs for the grid, ...).
class InfeasibleError : public std::runtime_error {
public:
    explicit InfeasibleError(const std::string& msg) : std::runtime_error(msg) {}
};

// Channel evaluation at zero distance.
class SingularityError : public std::runtime_error {
public:
    explicit SingularityError(const std::string& msg) : std::runtime_error(msg) {}
};

// Caller broke a documented precondition (illegal action, bad index).
class ContractViolation : public std::logic_error {
public:
    explicit ContractViolation(const std::string& msg) : std::logic_error(msg) {}
};

}  // namespace skylease
