#include "recip/error.hpp"

namespace recip {

std::string_view to_string(Errc code)
{
    switch (code) {
    case Errc::PerfectSquare: return "PerfectSquare";
    case Errc::ZeroDenominator: return "ZeroDenominator";
    case Errc::RationalValue: return "RationalValue";
    case Errc::InsufficientDigits: return "InsufficientDigits";
    case Errc::UnresolvedComparison: return "UnresolvedComparison";
    case Errc::OutOfRange: return "OutOfRange";
    case Errc::DomainError: return "DomainError";
    case Errc::ParameterMismatch: return "ParameterMismatch";
    case Errc::ParseError: return "ParseError";
    }
    return "Unknown";
}

Error::Error(Errc code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code)
{
}

void fail(Errc code, const std::string& what)
{
    throw Error(code, what);
}

} // namespace recip
