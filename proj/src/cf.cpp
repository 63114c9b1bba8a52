#include "recip/cf.hpp"

#include <string>

#include "recip/error.hpp"

namespace recip {

namespace {

mpz_class require_digit(const IrrationalNumber& x, std::size_t k)
{
    auto digit = x.partial_quotient(k);
    if (!digit) {
        fail(Errc::InsufficientDigits, "partial quotient a_" + std::to_string(k) + " of " + x.label() + " is not available");
    }
    return std::move(*digit);
}

mpfr_prec_t bits_of(const mpz_class& v)
{
    return sgn(v) == 0 ? 1 : static_cast<mpfr_prec_t>(mpz_sizeinbase(v.get_mpz_t(), 2));
}

// Width at most 2^-60 of the smaller endpoint magnitude, sign certified.
bool well_resolved(const Interval& value)
{
    if (!value.certainly_positive() && !value.certainly_negative()) {
        return false;
    }
    const Interval magnitude = abs(value);
    Float bound(magnitude.precision());
    mpfr_mul_2si(bound.get(), magnitude.lower().get(), -60, MPFR_RNDD);
    return compare(value.width(), bound) <= 0;
}

} // namespace

Interval LinearForm::enclose(const IrrationalNumber& alpha, mpfr_prec_t prec) const
{
    if (sgn(v) == 0) {
        return Interval::of(u, std::max<mpfr_prec_t>(prec, bits_of(u) + 2));
    }
    const mpfr_prec_t work = prec + bits_of(v) + bits_of(u) + 4;
    return alpha.enclose(work + bits_of(v)) * v + Interval::of(u, work);
}

std::vector<mpz_class> partial_quotients(const IrrationalNumber& x, std::size_t count)
{
    std::vector<mpz_class> out;
    out.reserve(count + 1);
    for (std::size_t k = 0; k <= count; ++k) {
        out.push_back(require_digit(x, k));
    }
    return out;
}

Fraction convergent_fraction(const IrrationalNumber& x, std::size_t k)
{
    mpz_class p_prev = 1, q_prev = 0;
    mpz_class p = require_digit(x, 0), q = 1;
    for (std::size_t i = 1; i <= k; ++i) {
        const mpz_class a = require_digit(x, i);
        mpz_class p_next = a * p + p_prev;
        mpz_class q_next = a * q + q_prev;
        p_prev = std::move(p);
        q_prev = std::move(q);
        p = std::move(p_next);
        q = std::move(q_next);
    }
    return {p, q};
}

ApproximationError approximation_error(const IrrationalNumber& x, std::size_t k)
{
    const Fraction f = convergent_fraction(x, k);
    // The sign of D_k is pinned by a_{k+1}; for a finite prefix that digit must exist.
    require_digit(x, k + 1);
    LinearForm form{-f.p, f.q};
    for (mpfr_prec_t prec = initial_precision + 2 * bits_of(f.q); prec <= precision_cap(); prec *= 2) {
        Interval value = form.enclose(x, prec);
        if (well_resolved(value)) {
            return {form, std::move(value)};
        }
        if (!x.refinable()) {
            if (value.certainly_positive() || value.certainly_negative()) {
                return {form, std::move(value)};
            }
            fail(Errc::InsufficientDigits, "sign of D_" + std::to_string(k) + " for " + x.label() + " is not pinned by the prefix");
        }
    }
    fail(Errc::UnresolvedComparison, "precision cap reached while enclosing D_" + std::to_string(k));
}

std::vector<Convergent> convergents(const IrrationalNumber& x, std::size_t count)
{
    std::vector<Convergent> out;
    out.reserve(count);
    mpz_class p_prev = 1, q_prev = 0;
    mpz_class p, q = 0;
    for (std::size_t k = 0; k < count; ++k) {
        const mpz_class a = require_digit(x, k);
        if (k == 0) {
            p = a;
            q = 1;
        } else {
            mpz_class p_next = a * p + p_prev;
            mpz_class q_next = a * q + q_prev;
            p_prev = std::move(p);
            q_prev = std::move(q);
            p = std::move(p_next);
            q = std::move(q_next);
        }
        Convergent c;
        c.k = k;
        c.a = a;
        c.p = p;
        c.q = q;
        ApproximationError err = approximation_error(x, k);
        c.error = std::move(err.form);
        c.error_enclosure = std::move(err.value);
        out.push_back(std::move(c));
    }
    return out;
}

std::size_t largest_convergent_index(const IrrationalNumber& x, std::int64_t N)
{
    if (N < 1) {
        fail(Errc::DomainError, "N must be at least 1");
    }
    const mpz_class bound(static_cast<long>(N));
    mpz_class q_prev = 0, q = 1;
    std::size_t k = 0;
    for (;;) {
        const mpz_class a = require_digit(x, k + 1);
        mpz_class q_next = a * q + q_prev;
        if (q_next > bound) {
            return k;
        }
        q_prev = std::move(q);
        q = std::move(q_next);
        ++k;
    }
}

} // namespace recip
