#include <cosetcsp/error.hpp>

using namespace cosetcsp;

auto cosetcsp::to_string(ErrorCode code) -> std::string_view
{
    switch (code) {
        case ErrorCode::NotAGroup: return "NotAGroup";
        case ErrorCode::EmptySet: return "EmptySet";
        case ErrorCode::NotCosetInput: return "NotCosetInput";
        case ErrorCode::NotSubgroup: return "NotSubgroup";
        case ErrorCode::NotADPInput: return "NotADPInput";
        case ErrorCode::UnknownCarrier: return "UnknownCarrier";
        case ErrorCode::UnknownRelation: return "UnknownRelation";
        case ErrorCode::ArityMismatch: return "ArityMismatch";
        case ErrorCode::ContradictoryInstance: return "ContradictoryInstance";
        case ErrorCode::BudgetExceeded: return "BudgetExceeded";
        case ErrorCode::CapExceeded: return "CapExceeded";
        case ErrorCode::EmptyRelation: return "EmptyRelation";
        case ErrorCode::NotAnAnomaly: return "NotAnAnomaly";
        case ErrorCode::Unsolvable: return "Unsolvable";
        case ErrorCode::EmptyH: return "EmptyH";
        case ErrorCode::PreconditionViolated: return "PreconditionViolated";
        case ErrorCode::AssertionFailure: return "AssertionFailure";
        case ErrorCode::InvalidSpec: return "InvalidSpec";
        case ErrorCode::ParseError: return "ParseError";
    }
    return "Unknown";
}

Error::Error(ErrorCode code, const std::string & detail) :
    std::runtime_error(std::string(to_string(code)) + (detail.empty() ? "" : ": " + detail)),
    _code(code)
{
}
