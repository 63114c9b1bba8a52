#pragma once

#include <cstdint>
#include <optional>

#include <gmpxx.h>
#include <mpfr.h>

#include "recip/alpha.hpp"
#include "recip/interval.hpp"

namespace recip::detail {

// Evaluates {n*alpha - gamma} for many n at one fixed precision with
// preallocated scratch. Not thread-safe; make one per thread.
class FracKernel {
public:
    enum class Status { Ok, ExactZero, Unresolved };
    enum class Limit { Precision, AlphaDigits, ShiftRadius };

    FracKernel(const IrrationalNumber& alpha, const Shift& gamma, mpfr_prec_t frac_bits, std::int64_t max_n);
    FracKernel(const FracKernel&) = delete;
    FracKernel& operator=(const FracKernel&) = delete;
    ~FracKernel();

    Status eval(std::int64_t n);

    mpfr_srcptr lower() const noexcept { return lo_; }
    mpfr_srcptr upper() const noexcept { return hi_; }
    Interval value() const;

    mpfr_prec_t precision() const noexcept { return prec_; }
    mpfr_prec_t frac_bits() const noexcept { return frac_bits_; }

    // What stands in the way of resolving more terms at higher precision.
    Limit limit() const;

private:
    const IrrationalNumber& alpha_;
    const Shift& gamma_;
    mpfr_prec_t frac_bits_;
    mpfr_prec_t prec_;
    std::int64_t max_n_;
    std::optional<std::int64_t> zero_index_;
    mpfr_t alpha_lo_, alpha_hi_, gamma_lo_, gamma_hi_;
    mpfr_t lo_, hi_, floor_lo_, floor_hi_;
};

// Doubles the fractional precision starting at 64 bits; raises the error
// matching the kernel's limit once doubling can no longer help.
[[noreturn]] void raise_unresolved(const FracKernel& kernel, const std::string& what);

} // namespace recip::detail
