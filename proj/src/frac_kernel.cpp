#include "recip/detail/frac_kernel.hpp"

#include <algorithm>
#include <cstdlib>
#include <string>

#include "recip/error.hpp"

namespace recip::detail {

namespace {

mpfr_prec_t bits_of(const mpz_class& v)
{
    return sgn(v) == 0 ? 1 : static_cast<mpfr_prec_t>(mpz_sizeinbase(v.get_mpz_t(), 2));
}

mpfr_prec_t bits_of(std::int64_t v)
{
    return bits_of(mpz_class(static_cast<long>(v < 0 ? -v : v)));
}

mpz_class magnitude_bound(const mpq_class& q)
{
    mpz_class out;
    mpz_cdiv_q(out.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return abs(out) + 1;
}

} // namespace

FracKernel::FracKernel(const IrrationalNumber& alpha, const Shift& gamma, mpfr_prec_t frac_bits, std::int64_t max_n)
    : alpha_(alpha), gamma_(gamma), frac_bits_(frac_bits), max_n_(std::max<std::int64_t>(max_n, 1))
{
    const mpz_class coefficient = magnitude_bound(gamma.alpha_coefficient());
    const mpz_class alpha_int = abs(mpz_class(*alpha.partial_quotient(0))) + 1;
    const mpfr_prec_t n_bits = bits_of(max_n_) + bits_of(coefficient);
    const mpfr_prec_t int_bits = n_bits + bits_of(alpha_int) + bits_of(magnitude_bound(gamma.offset())) + 2;
    prec_ = frac_bits + int_bits + 8;

    const Interval a = alpha.enclose(frac_bits + n_bits + 4);
    const Interval g = gamma.enclose(alpha, frac_bits + n_bits + 4);

    for (mpfr_ptr v : {alpha_lo_, alpha_hi_, gamma_lo_, gamma_hi_, lo_, hi_, floor_lo_, floor_hi_}) {
        mpfr_init2(v, prec_);
    }
    mpfr_set(alpha_lo_, a.lower().get(), MPFR_RNDD);
    mpfr_set(alpha_hi_, a.upper().get(), MPFR_RNDU);
    mpfr_set(gamma_lo_, g.lower().get(), MPFR_RNDD);
    mpfr_set(gamma_hi_, g.upper().get(), MPFR_RNDU);

    if (const auto hit = gamma.integer_hit_index(); hit && hit->fits_slong_p()) {
        zero_index_ = hit->get_si();
    }
}

FracKernel::~FracKernel()
{
    for (mpfr_ptr v : {alpha_lo_, alpha_hi_, gamma_lo_, gamma_hi_, lo_, hi_, floor_lo_, floor_hi_}) {
        mpfr_clear(v);
    }
}

FracKernel::Status FracKernel::eval(std::int64_t n)
{
    if (zero_index_ && *zero_index_ == n) {
        return Status::ExactZero;
    }
    const long k = static_cast<long>(n);
    mpfr_mul_si(lo_, k >= 0 ? alpha_lo_ : alpha_hi_, k, MPFR_RNDD);
    mpfr_sub(lo_, lo_, gamma_hi_, MPFR_RNDD);
    mpfr_mul_si(hi_, k >= 0 ? alpha_hi_ : alpha_lo_, k, MPFR_RNDU);
    mpfr_sub(hi_, hi_, gamma_lo_, MPFR_RNDU);

    mpfr_floor(floor_lo_, lo_);
    mpfr_floor(floor_hi_, hi_);
    if (!mpfr_equal_p(floor_lo_, floor_hi_)) {
        return Status::Unresolved;
    }
    mpfr_sub(lo_, lo_, floor_lo_, MPFR_RNDD);
    mpfr_sub(hi_, hi_, floor_lo_, MPFR_RNDU);
    if (mpfr_sgn(lo_) <= 0) {
        return Status::Unresolved;
    }
    return Status::Ok;
}

Interval FracKernel::value() const
{
    Float lo(prec_), hi(prec_);
    mpfr_set(lo.get(), lo_, MPFR_RNDD);
    mpfr_set(hi.get(), hi_, MPFR_RNDU);
    return Interval(std::move(lo), std::move(hi));
}

FracKernel::Limit FracKernel::limit() const
{
    if (!gamma_.exact() && static_cast<mpfr_prec_t>(gamma_.radius_bits()) <= frac_bits_ + 2) {
        return Limit::ShiftRadius;
    }
    if (!alpha_.refinable()) {
        // Error contributed by alpha to n*alpha - gamma, against the target 2^-frac_bits.
        mpfr_t spread;
        mpfr_init2(spread, 64);
        mpfr_sub(spread, alpha_hi_, alpha_lo_, MPFR_RNDU);
        const mpz_class reach = mpz_class(static_cast<long>(max_n_)) + magnitude_bound(gamma_.alpha_coefficient());
        mpfr_mul_z(spread, spread, reach.get_mpz_t(), MPFR_RNDU);
        mpfr_mul_2si(spread, spread, frac_bits_ + 2, MPFR_RNDU);
        const bool limited = mpfr_cmp_ui(spread, 1) >= 0;
        mpfr_clear(spread);
        if (limited) {
            return Limit::AlphaDigits;
        }
    }
    return Limit::Precision;
}

void raise_unresolved(const FracKernel& kernel, const std::string& what)
{
    switch (kernel.limit()) {
    case FracKernel::Limit::AlphaDigits:
        fail(Errc::InsufficientDigits, what + " (continued-fraction prefix too short)");
    case FracKernel::Limit::ShiftRadius:
        fail(Errc::UnresolvedComparison, what + " (shift known only to its stated radius)");
    case FracKernel::Limit::Precision:
        break;
    }
    fail(Errc::UnresolvedComparison, what + " (precision cap reached)");
}

} // namespace recip::detail
