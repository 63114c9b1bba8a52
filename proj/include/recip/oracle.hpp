#pragma once

// Slow reference implementations. Everything here works on fixed-point
// integers (value = m / 2^P) and does not use the sums, three-gap or
// continued-fraction code of the library; only the digit source of alpha
// and the Shift parameters are shared.

#include <cstdint>
#include <vector>

#include <gmpxx.h>

#include "recip/alpha.hpp"
#include "recip/interval.hpp"

namespace recip::oracle {

struct OracleConfig {
    unsigned long precision_bits = 256; // at least 128
    std::uint64_t seed = 1;
};

// [lo, hi] / 2^bits.
struct Fixed {
    mpz_class lo;
    mpz_class hi;
    unsigned long bits = 0;

    Interval to_interval() const;
};

Fixed alpha_fixed(const IrrationalNumber& x, unsigned long bits);
Fixed shift_fixed(const IrrationalNumber& x, const Shift& gamma, unsigned long bits);

struct Point {
    std::int64_t n = 0;
    Interval value = Interval::point(0);
};

// {n alpha} for 1 <= n <= N in increasing order, certified separated.
std::vector<Point> sorted_points(const IrrationalNumber& x, std::int64_t N, const OracleConfig& cfg = {});

// The N + 1 interval lengths between 0, the sorted points and 1, left to right.
std::vector<Interval> gap_multiset(const IrrationalNumber& x, std::int64_t N, const OracleConfig& cfg = {});

struct GapValue {
    Interval value = Interval::point(0);
    std::int64_t multiplicity = 0;
};

// Groups overlapping enclosures; groups are certified distinct and sorted
// by value. Throws UnresolvedComparison if the grouping is ambiguous.
std::vector<GapValue> distinct_values(const std::vector<Interval>& values);

struct BruteOptions {
    bool nearest = false;           // 1/||.|| instead of 1/{.}
    std::int64_t residue_modulus = 0; // also skip n = n' (mod this), 0 for none
    bool use_own_modulus = false;   // compute q_K from the digits of alpha
    std::int64_t first = 0;         // lowest n summed
    double tol = 0x1p-40;
};

struct BruteSum {
    Interval value = Interval::point(0);
    std::int64_t excluded = 0;
    std::int64_t modulus = 0;
    bool exact_hit = false;
};

// sum over first <= n <= N, n not excluded, of 1 / (n^a f(n)^b) with
// f(n) = {n alpha - gamma} (or its distance to the nearest integer) and the
// excluded index chosen as the minimiser of f over 0 <= n <= N.
BruteSum sum_brute(const IrrationalNumber& x, const Shift& gamma, std::int64_t N, const mpq_class& a,
                   const mpq_class& b, const OracleConfig& cfg = {}, const BruteOptions& opts = {});

// Largest q_k <= N, by the plain recurrence.
mpz_class largest_denominator(const IrrationalNumber& x, std::int64_t N);

} // namespace recip::oracle
