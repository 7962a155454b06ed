#pragma once

#include <stdexcept>
#include <string>

namespace torus {

/// A documented precondition of an operation does not hold for the given data
/// (as opposed to malformed input, which raises ParseError or std::invalid_argument).
class ContractViolation : public std::logic_error {
public:
    explicit ContractViolation(const std::string& what) : std::logic_error(what) {}
};

}  // namespace torus
