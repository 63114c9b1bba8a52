#include "recip/three_gap.hpp"

#include <limits>
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

// |D_j| = (-1)^j (q_j alpha - p_j).
LinearForm abs_error(const mpz_class& p, const mpz_class& q, std::size_t j)
{
    return j % 2 == 0 ? LinearForm{-p, q} : LinearForm{p, -q};
}

void check_index(std::int64_t n, const ThreeGapDecomposition& dec)
{
    if (n < 0 || n > dec.N) {
        fail(Errc::OutOfRange, "index " + std::to_string(n) + " outside [0, " + std::to_string(dec.N) + "]");
    }
}

constexpr mpfr_prec_t enclosure_bits = 128;

} // namespace

char to_char(GapClass c)
{
    switch (c) {
    case GapClass::A: return 'A';
    case GapClass::B: return 'B';
    case GapClass::C: return 'C';
    }
    return '?';
}

const LinearForm& ThreeGapDecomposition::delta(GapClass c) const
{
    switch (c) {
    case GapClass::A: return delta_A;
    case GapClass::B: return delta_B;
    case GapClass::C: break;
    }
    return delta_C;
}

const Interval& ThreeGapDecomposition::delta_enclosure(GapClass c) const
{
    switch (c) {
    case GapClass::A: return delta_A_enclosure;
    case GapClass::B: return delta_B_enclosure;
    case GapClass::C: break;
    }
    return delta_C_enclosure;
}

std::int64_t ThreeGapDecomposition::count(GapClass c) const
{
    switch (c) {
    case GapClass::A: return count_A;
    case GapClass::B: return count_B;
    case GapClass::C: break;
    }
    return count_C;
}

ThreeGapDecomposition decompose(const IrrationalNumber& x, std::int64_t N)
{
    if (N < 1) {
        fail(Errc::DomainError, "N must be at least 1");
    }
    const mpz_class bound(static_cast<long>(N));

    // Walk the convergents until q_{k+1} + q_k > N. Only integers are involved.
    mpz_class p_prev = 1, q_prev = 0;
    mpz_class p = require_digit(x, 0), q = 1;
    std::size_t k = 0;
    mpz_class a_next, p_next, q_next;
    for (;;) {
        a_next = require_digit(x, k + 1);
        p_next = a_next * p + p_prev;
        q_next = a_next * q + q_prev;
        if (q_next + q > bound) {
            break;
        }
        p_prev = p;
        q_prev = q;
        p = p_next;
        q = q_next;
        ++k;
    }

    ThreeGapDecomposition dec;
    dec.N = N;
    dec.k = k;
    dec.q_prev = q_prev.get_si();
    dec.q = q.get_si();
    dec.a_next = a_next;

    const std::int64_t rest = N - dec.q_prev;
    dec.r = rest / dec.q;
    dec.s = rest % dec.q;

    const LinearForm err_k = abs_error(p, q, k);
    const LinearForm err_next = abs_error(p_next, q_next, k + 1);
    dec.delta_A = err_k;
    dec.delta_B = err_next + (a_next - dec.r) * err_k;
    dec.delta_C = dec.delta_A + dec.delta_B;

    dec.count_A = N + 1 - dec.q;
    dec.count_B = dec.s + 1;
    dec.count_C = dec.q - dec.s - 1;

    const std::int64_t sign = k % 2 == 0 ? 1 : -1;
    dec.step_A = sign * dec.q;
    dec.step_B = -sign * (dec.q_prev + dec.r * dec.q);
    dec.step_C = -sign * (dec.q_prev + (dec.r - 1) * dec.q);

    dec.delta_A_enclosure = dec.delta_A.enclose(x, enclosure_bits);
    dec.delta_B_enclosure = dec.delta_B.enclose(x, enclosure_bits);
    dec.delta_C_enclosure = dec.delta_C.enclose(x, enclosure_bits);
    return dec;
}

GapClass classify(std::int64_t n, const ThreeGapDecomposition& dec)
{
    check_index(n, dec);
    const std::int64_t via_a = n + dec.step_A;
    if (via_a >= 0 && via_a <= dec.N) {
        return GapClass::A;
    }
    const std::int64_t via_b = n + dec.step_B;
    if (via_b >= 0 && via_b <= dec.N) {
        return GapClass::B;
    }
    return GapClass::C;
}

std::int64_t step(std::int64_t n, const ThreeGapDecomposition& dec)
{
    switch (classify(n, dec)) {
    case GapClass::A: return n + dec.step_A;
    case GapClass::B: return n + dec.step_B;
    case GapClass::C: break;
    }
    return n + dec.step_C;
}

std::vector<std::int64_t> permutation(const ThreeGapDecomposition& dec)
{
    std::vector<std::int64_t> out;
    out.reserve(static_cast<std::size_t>(dec.N));
    std::int64_t n = 0;
    for (std::int64_t i = 0; i < dec.N; ++i) {
        n = step(n, dec);
        out.push_back(n);
    }
    return out;
}

std::vector<std::int64_t> permutation(const IrrationalNumber& x, std::int64_t N)
{
    return permutation(decompose(x, N));
}

const LinearForm& gap_after(std::int64_t n, const ThreeGapDecomposition& dec)
{
    return dec.delta(classify(n, dec));
}

} // namespace recip
