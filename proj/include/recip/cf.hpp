#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include <gmpxx.h>

#include "recip/alpha.hpp"
#include "recip/interval.hpp"

namespace recip {

// The exact value u + v*alpha for integers u, v.
struct LinearForm {
    mpz_class u;
    mpz_class v;

    Interval enclose(const IrrationalNumber& alpha, mpfr_prec_t prec) const;

    friend bool operator==(const LinearForm& a, const LinearForm& b) { return a.u == b.u && a.v == b.v; }
    friend LinearForm operator+(const LinearForm& a, const LinearForm& b) { return {a.u + b.u, a.v + b.v}; }
    friend LinearForm operator-(const LinearForm& a, const LinearForm& b) { return {a.u - b.u, a.v - b.v}; }
    friend LinearForm operator-(const LinearForm& a) { return {-a.u, -a.v}; }
    friend LinearForm operator*(const mpz_class& k, const LinearForm& a) { return {k * a.u, k * a.v}; }
};

struct Convergent {
    std::size_t k = 0;
    mpz_class a;
    mpz_class p;
    mpz_class q;
    // D_k = q_k*alpha - p_k, with an enclosure whose sign is certified.
    LinearForm error;
    Interval error_enclosure = Interval::point(0);
};

// a_0, ..., a_count.
std::vector<mpz_class> partial_quotients(const IrrationalNumber& x, std::size_t count);

// Convergents k = 0, ..., count - 1. Needs digits a_0..a_count so that
// every D_k enclosure has a certified sign.
std::vector<Convergent> convergents(const IrrationalNumber& x, std::size_t count);

// p_k / q_k for k >= 0, without the error enclosure.
struct Fraction {
    mpz_class p;
    mpz_class q;
};
Fraction convergent_fraction(const IrrationalNumber& x, std::size_t k);

struct ApproximationError {
    LinearForm form;
    Interval value;
};

// D_k with an enclosure carrying about 60 significant bits (or as much as a
// finite prefix allows, as long as the sign is certified).
ApproximationError approximation_error(const IrrationalNumber& x, std::size_t k);

// Largest K with q_K <= N.
std::size_t largest_convergent_index(const IrrationalNumber& x, std::int64_t N);

} // namespace recip
