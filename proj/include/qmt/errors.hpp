#pragma once

#include <stdexcept>
#include <string>

namespace qmt {

/// Raised when an input falls outside the tractable class an operation is
/// defined for (non-tree associated graph, failed local QMC condition, ...).
/// Callers get a loud refusal instead of a silently wrong answer.
class HypothesisError : public std::runtime_error {
public:
    explicit HypothesisError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace qmt
