#pragma once

#include <cstdint>
#include <string>

#include <gmpxx.h>

#include "recip/alpha.hpp"
#include "recip/interval.hpp"

namespace recip {

inline constexpr double default_tolerance = 0x1p-30;

enum class SumKind {
    Frac,                 // sum over 0 <= n <= N, n != n', of 1/{n alpha - gamma}
    FracExcludingResidue, // same, skipping every n = n' (mod q_K)
    Dist,                 // sum over n != n* of 1/||n alpha - gamma||
    Power,                // sum over n != n' of 1/{n alpha - gamma}^b
    General,              // sum over 1 <= n <= N, n != n', of 1/(n^a {n alpha - gamma}^b)
};

std::string_view to_string(SumKind kind);

struct SumReport {
    SumKind kind = SumKind::Frac;
    std::string alpha;
    std::string gamma;
    std::int64_t N = 0;
    mpq_class a = 0;
    mpq_class b = 1;

    // n' (or n* for Dist). For FracExcludingResidue every n congruent to it
    // modulo `modulus` is skipped.
    std::int64_t excluded = 0;
    std::int64_t modulus = 0;
    std::string exclusion;
    bool exact_hit = false;

    Interval value = Interval::point(0);
    std::int64_t term_count = 0;
    double tol = default_tolerance;
};

// A certified minimiser over 0 <= n <= N.
struct Argmin {
    std::int64_t index = 0;
    bool exact_hit = false;
    // Enclosure of the minimum (a point zero on an exact hit).
    Interval value = Interval::point(0);
};

// n' minimising {n alpha - gamma}.
Argmin argmin_frac(const IrrationalNumber& x, const Shift& gamma, std::int64_t N);
// n* minimising ||n alpha - gamma||; exact ties go to the smallest n.
Argmin argmin_dist(const IrrationalNumber& x, const Shift& gamma, std::int64_t N);

SumReport sum_reciprocal_frac(const IrrationalNumber& x, const Shift& gamma, std::int64_t N,
                              double tol = default_tolerance);
SumReport sum_reciprocal_frac_excluding_residue(const IrrationalNumber& x, const Shift& gamma, std::int64_t N,
                                                double tol = default_tolerance);
SumReport sum_reciprocal_dist(const IrrationalNumber& x, const Shift& gamma, std::int64_t N,
                              double tol = default_tolerance);
SumReport sum_reciprocal_power(const IrrationalNumber& x, const Shift& gamma, std::int64_t N, const mpq_class& b,
                               double tol = default_tolerance);
SumReport sum_general(const IrrationalNumber& x, const Shift& gamma, std::int64_t N, const mpq_class& a,
                      const mpq_class& b, double tol = default_tolerance);

struct SemiHomogeneous {
    std::int64_t n_prime = 0;
    Shift gamma_prime = Shift::rational(0);
};

// Moves gamma down onto the nearest point {n' alpha} at or above it
// (or onto 0 when gamma lies above every point), which can only increase
// every term of the frac sum.
SemiHomogeneous reduce_to_semihomogeneous(const IrrationalNumber& x, const Shift& gamma, std::int64_t N);

} // namespace recip
