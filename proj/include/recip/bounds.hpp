#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

#include <gmpxx.h>

#include "recip/alpha.hpp"
#include "recip/interval.hpp"
#include "recip/sums.hpp"

namespace recip {

enum class BoundKind {
    Thm1E1,        // 4N(log q_K + 1) + 2 q_{K+1}(log(N/q_K) + 1)
    Thm1E2,        // 4N(log q_K + 1), residue class of n' removed
    Cor1,          // 8N(log q_K + 1) + 4 q_{K+1}(log(N/q_K) + 2)
    Thm4BGreater1, // 2^{1+b} zeta(b) N^b + 2^b zeta(b) q_{K+1}^b
    Thm4BLess1,    // 2^{1+b}/(1-b) N + 2^b/(1-b) q_{K+1}^b (N/q_K)^{1-b}
};

std::string_view to_string(BoundKind kind);

enum class Verdict { Holds, Inconclusive };

std::string_view to_string(Verdict verdict);

inline constexpr mpfr_prec_t bound_precision = 128;

struct BoundValue {
    BoundKind kind = BoundKind::Thm1E1;
    std::string alpha;
    std::int64_t N = 0;
    mpq_class b = 1;
    std::size_t K = 0;
    mpz_class q_K;
    mpz_class q_K1;
    Interval value = Interval::point(0);
};

BoundValue bound_T(const IrrationalNumber& x, std::int64_t N, mpfr_prec_t prec = bound_precision);
BoundValue bound_T_excluding(const IrrationalNumber& x, std::int64_t N, mpfr_prec_t prec = bound_precision);
BoundValue bound_dist(const IrrationalNumber& x, std::int64_t N, mpfr_prec_t prec = bound_precision);
// Selects the b > 1 or b < 1 branch; b = 1 is a DomainError.
BoundValue bound_power(const IrrationalNumber& x, std::int64_t N, const mpq_class& b,
                       mpfr_prec_t prec = bound_precision);

// zeta(b) for b > 1 to width <= tol: a partial sum plus the integral
// bracket for the tail. Results for tol and any smaller tol are nested.
Interval zeta(const mpq_class& b, double tol);

struct BoundReport {
    BoundKind kind = BoundKind::Thm1E1;
    std::string alpha;
    std::string gamma;
    std::int64_t N = 0;
    mpq_class b = 1;
    std::size_t K = 0;
    mpz_class q_K;
    mpz_class q_K1;
    Interval bound = Interval::point(0);
    Interval sum = Interval::point(0);
    Verdict verdict = Verdict::Inconclusive;
    // sum.upper / bound.lower, rounded up.
    double tightness = 0;
};

// Holds iff sum.upper <= bound.lower. Throws ParameterMismatch when the
// sum and bound do not describe the same (alpha, N, b) and sum kind.
BoundReport verify(const SumReport& sum, const BoundValue& bound);

// Computes the sum matching `kind`, the bound, and verifies; an
// Inconclusive first attempt is retried once at doubled precision.
BoundReport check_bound(const IrrationalNumber& x, const Shift& gamma, std::int64_t N, BoundKind kind,
                        const mpq_class& b = 1, double tol = default_tolerance);

// Power-sum bound kind for exponent b.
BoundKind power_bound_kind(const mpq_class& b);

} // namespace recip
