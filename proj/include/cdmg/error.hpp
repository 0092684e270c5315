#ifndef CDMG_ERROR_HPP
#define CDMG_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace cdmg {

enum class ErrorCode {
    UnknownVertex,
    DuplicateVertex,
    DuplicateEdge,
    InvalidName,
    CycleFound,
    SelfLoopFound,
    NotAPartition,
    InvalidAdmg,
    WalkNotInGraph,
    EmptyWalk,
    SetsNotDisjoint,
    GraphTooLarge,
    RuleActuallyApplies,
    AssumptionOneViolated,
    EmptyTarget,
    NonPositiveDistribution,
    UnboundVariable,
    NotObservational,
    NotIdentified,
    SearchSpaceTooLarge,
    UnknownSizes,
    PathNotActive,
    OrderIncompatible,
    StateSpaceTooLarge,
    InvalidArgument,
    Syntax,
};

std::string_view to_string(ErrorCode code);

/// Base exception for every failure raised by the library. The code is the
/// stable, machine-readable part; the message is for humans.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

} // namespace cdmg

#endif
