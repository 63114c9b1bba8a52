#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace recip {

enum class Errc {
    PerfectSquare,
    ZeroDenominator,
    RationalValue,
    InsufficientDigits,
    UnresolvedComparison,
    OutOfRange,
    DomainError,
    ParameterMismatch,
    ParseError,
};

std::string_view to_string(Errc code);

// All library failures surface as this exception; `code()` tells the caller
// whether refining the input (more digits, more precision) can help.
class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what);

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

[[noreturn]] void fail(Errc code, const std::string& what);

} // namespace recip
