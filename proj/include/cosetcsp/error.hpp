#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace cosetcsp
{
    enum class ErrorCode
    {
        NotAGroup,
        EmptySet,
        NotCosetInput,
        NotSubgroup,
        NotADPInput,
        UnknownCarrier,
        UnknownRelation,
        ArityMismatch,
        ContradictoryInstance,
        BudgetExceeded,
        CapExceeded,
        EmptyRelation,
        NotAnAnomaly,
        Unsolvable,
        EmptyH,
        PreconditionViolated,
        AssertionFailure,
        InvalidSpec,
        ParseError
    };

    auto to_string(ErrorCode code) -> std::string_view;

    /// Every failure raised by the library carries one of the codes above, so
    /// callers (the CLI in particular) can map them onto exit codes.
    class Error : public std::runtime_error
    {
        private:
            ErrorCode _code;

        public:
            Error(ErrorCode code, const std::string & detail);

            auto code() const noexcept -> ErrorCode { return _code; }
    };
}
