#pragma once

#include <stdexcept>
#include <string>

namespace sandnet {

enum class ErrorCode {
    SelfLoop,
    DuplicateEdge,
    Disconnected,
    ThresholdBelowDegree,
    OutOfRange,
    EvenSideWithHub,
    UnknownNode,
    LengthMismatch,
    NotUnstable,
    NonTermination,
    NoHub,
    Oversubtraction,
    ZeroInflow,
    MismatchedScenario,
    BudgetInfeasible,
    ScheduleExhausted,
    SyntaxError,
    ValidationError,
    NotAGrid,
};

inline const char* to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::SelfLoop: return "SelfLoop";
        case ErrorCode::DuplicateEdge: return "DuplicateEdge";
        case ErrorCode::Disconnected: return "Disconnected";
        case ErrorCode::ThresholdBelowDegree: return "ThresholdBelowDegree";
        case ErrorCode::OutOfRange: return "OutOfRange";
        case ErrorCode::EvenSideWithHub: return "EvenSideWithHub";
        case ErrorCode::UnknownNode: return "UnknownNode";
        case ErrorCode::LengthMismatch: return "LengthMismatch";
        case ErrorCode::NotUnstable: return "NotUnstable";
        case ErrorCode::NonTermination: return "NonTermination";
        case ErrorCode::NoHub: return "NoHub";
        case ErrorCode::Oversubtraction: return "Oversubtraction";
        case ErrorCode::ZeroInflow: return "ZeroInflow";
        case ErrorCode::MismatchedScenario: return "MismatchedScenario";
        case ErrorCode::BudgetInfeasible: return "BudgetInfeasible";
        case ErrorCode::ScheduleExhausted: return "ScheduleExhausted";
        case ErrorCode::SyntaxError: return "SyntaxError";
        case ErrorCode::ValidationError: return "ValidationError";
        case ErrorCode::NotAGrid: return "NotAGrid";
    }
    return "Unknown";
}

/// Library-wide exception carrying a machine-checkable error code.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
    throw Error(code, message);
}

} // namespace sandnet
