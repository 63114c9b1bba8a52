#include "recip/bounds.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <optional>
#include <vector>

#include "recip/cf.hpp"
#include "recip/error.hpp"

namespace recip {

std::string_view to_string(BoundKind kind)
{
    switch (kind) {
    case BoundKind::Thm1E1: return "Thm1-e1";
    case BoundKind::Thm1E2: return "Thm1-e2";
    case BoundKind::Cor1: return "Cor1";
    case BoundKind::Thm4BGreater1: return "Thm4-b>1";
    case BoundKind::Thm4BLess1: return "Thm4-b<1";
    }
    return "?";
}

std::string_view to_string(Verdict verdict)
{
    return verdict == Verdict::Holds ? "Holds" : "Inconclusive";
}

BoundKind power_bound_kind(const mpq_class& b)
{
    if (b <= 0) {
        fail(Errc::DomainError, "exponent b must be positive");
    }
    if (b == 1) {
        fail(Errc::DomainError, "b = 1 is covered by the Thm1-e1 bound");
    }
    return b > 1 ? BoundKind::Thm4BGreater1 : BoundKind::Thm4BLess1;
}

namespace {

// Fixed ingredients shared by all bounds: K, q_K, q_{K+1}.
BoundValue prepare(BoundKind kind, const IrrationalNumber& x, std::int64_t N)
{
    if (N < 1) {
        fail(Errc::DomainError, "N must be at least 1");
    }
    BoundValue out;
    out.kind = kind;
    out.alpha = x.label();
    out.N = N;
    out.K = largest_convergent_index(x, N);
    out.q_K = convergent_fraction(x, out.K).q;
    out.q_K1 = convergent_fraction(x, out.K + 1).q;
    return out;
}

Interval of_int(std::int64_t v, mpfr_prec_t prec)
{
    return Interval::of(mpz_class(static_cast<long>(v)), prec);
}

// N (log q_K + 1)
Interval log_head(const BoundValue& v, mpfr_prec_t prec)
{
    return of_int(v.N, prec) * (log(Interval::of(v.q_K, prec)) + Interval::point(1, prec));
}

// log(N / q_K)
Interval log_ratio(const BoundValue& v, mpfr_prec_t prec)
{
    return log(Interval::of(mpq_class(mpz_class(static_cast<long>(v.N)), v.q_K), prec));
}

constexpr double bound_zeta_tolerance = 0x1p-24;

} // namespace

BoundValue bound_T(const IrrationalNumber& x, std::int64_t N, mpfr_prec_t prec)
{
    BoundValue v = prepare(BoundKind::Thm1E1, x, N);
    v.value = Interval::point(4, prec) * log_head(v, prec) +
              Interval::of(mpz_class(2 * v.q_K1), prec) * (log_ratio(v, prec) + Interval::point(1, prec));
    return v;
}

BoundValue bound_T_excluding(const IrrationalNumber& x, std::int64_t N, mpfr_prec_t prec)
{
    BoundValue v = prepare(BoundKind::Thm1E2, x, N);
    v.value = Interval::point(4, prec) * log_head(v, prec);
    return v;
}

BoundValue bound_dist(const IrrationalNumber& x, std::int64_t N, mpfr_prec_t prec)
{
    BoundValue v = prepare(BoundKind::Cor1, x, N);
    v.value = Interval::point(8, prec) * log_head(v, prec) +
              Interval::of(mpz_class(4 * v.q_K1), prec) * (log_ratio(v, prec) + Interval::point(2, prec));
    return v;
}

BoundValue bound_power(const IrrationalNumber& x, std::int64_t N, const mpq_class& b, mpfr_prec_t prec)
{
    const BoundKind kind = power_bound_kind(b);
    BoundValue v = prepare(kind, x, N);
    v.b = b;
    const Interval e = Interval::of(b, prec);
    const Interval two_b = pow(Interval::point(2, prec), e);
    const Interval n = of_int(N, prec);
    const Interval q_next_b = pow(Interval::of(v.q_K1, prec), e);
    if (kind == BoundKind::Thm4BGreater1) {
        const Interval z = zeta(b, bound_zeta_tolerance);
        v.value = Interval::point(2, prec) * two_b * z * pow(n, e) + two_b * z * q_next_b;
    } else {
        const Interval one_minus_b = Interval::of(mpq_class(1 - b), prec);
        const Interval ratio = Interval::of(mpq_class(mpz_class(static_cast<long>(N)), v.q_K), prec);
        v.value = Interval::point(2, prec) * two_b / one_minus_b * n +
                  two_b / one_minus_b * q_next_b * pow(ratio, one_minus_b);
    }
    return v;
}

namespace {

// Level i of the zeta ladder: partial sum over j < M_i = 16 * 2^i plus the
// tail bracket [M^{1-b}/(b-1), (M-1)^{1-b}/(b-1)]. The bracket is about
// M^{-b} wide, and the working precision grows with (1 + b) log2 M so the
// rounding in the partial sum stays well below that.
Interval zeta_level(const mpq_class& b, unsigned level)
{
    const unsigned long M = 16UL << level;
    const double b_approx = b.get_d();
    const auto prec = static_cast<mpfr_prec_t>(64 + std::ceil((1 + b_approx) * (level + 4)));

    Float b_lo(prec), b_hi(prec), t(prec), u(prec), sum_lo(prec), sum_hi(prec);
    mpfr_set_q(b_lo.get(), b.get_mpq_t(), MPFR_RNDD);
    mpfr_set_q(b_hi.get(), b.get_mpq_t(), MPFR_RNDU);
    const bool integer = b.get_den() == 1 && b.get_num().fits_ulong_p();
    const unsigned long bi = integer ? b.get_num().get_ui() : 0;

    mpfr_set_ui(sum_lo.get(), 0, MPFR_RNDN);
    mpfr_set_ui(sum_hi.get(), 0, MPFR_RNDN);
    for (unsigned long j = 1; j < M; ++j) {
        if (integer) {
            mpfr_ui_pow_ui(t.get(), j, bi, MPFR_RNDU);
            mpfr_ui_div(t.get(), 1, t.get(), MPFR_RNDD);
            mpfr_add(sum_lo.get(), sum_lo.get(), t.get(), MPFR_RNDD);
            mpfr_ui_pow_ui(t.get(), j, bi, MPFR_RNDD);
            mpfr_ui_div(t.get(), 1, t.get(), MPFR_RNDU);
            mpfr_add(sum_hi.get(), sum_hi.get(), t.get(), MPFR_RNDU);
        } else {
            // j^{-b} decreases in b.
            mpfr_neg(u.get(), b_hi.get(), MPFR_RNDN);
            mpfr_ui_pow(t.get(), j, u.get(), MPFR_RNDD);
            mpfr_add(sum_lo.get(), sum_lo.get(), t.get(), MPFR_RNDD);
            mpfr_neg(u.get(), b_lo.get(), MPFR_RNDN);
            mpfr_ui_pow(t.get(), j, u.get(), MPFR_RNDU);
            mpfr_add(sum_hi.get(), sum_hi.get(), t.get(), MPFR_RNDU);
        }
    }

    // Lower tail: M^{1-b_hi} / (b_hi - 1).
    mpfr_ui_sub(u.get(), 1, b_hi.get(), MPFR_RNDD);
    mpfr_ui_pow(t.get(), M, u.get(), MPFR_RNDD);
    mpfr_sub_ui(u.get(), b_hi.get(), 1, MPFR_RNDU);
    mpfr_div(t.get(), t.get(), u.get(), MPFR_RNDD);
    mpfr_add(sum_lo.get(), sum_lo.get(), t.get(), MPFR_RNDD);
    // Upper tail: (M - 1)^{1-b_lo} / (b_lo - 1).
    mpfr_ui_sub(u.get(), 1, b_lo.get(), MPFR_RNDU);
    mpfr_ui_pow(t.get(), M - 1, u.get(), MPFR_RNDU);
    mpfr_sub_ui(u.get(), b_lo.get(), 1, MPFR_RNDD);
    mpfr_div(t.get(), t.get(), u.get(), MPFR_RNDU);
    mpfr_add(sum_hi.get(), sum_hi.get(), t.get(), MPFR_RNDU);

    return Interval(std::move(sum_lo), std::move(sum_hi));
}

struct ZetaLadder {
    std::vector<Interval> levels;        // E_0, E_1, ...
    std::vector<Interval> intersections; // E_0 cap ... cap E_i
};

std::mutex zeta_mutex;
std::map<mpq_class, ZetaLadder> zeta_cache;

constexpr unsigned zeta_max_level = 40;

} // namespace

Interval zeta(const mpq_class& b, double tol)
{
    if (b <= 1) {
        fail(Errc::DomainError, "zeta(b) needs b > 1");
    }
    if (!(tol > 0)) {
        fail(Errc::DomainError, "tolerance must be positive");
    }
    std::lock_guard lock(zeta_mutex);
    ZetaLadder& ladder = zeta_cache[b];
    // The answer for tol is the intersection up to the first level that is
    // narrow enough; the ladder is fixed, so smaller tolerances give subsets.
    for (unsigned i = 0; i <= zeta_max_level; ++i) {
        if (i == ladder.levels.size()) {
            ladder.levels.push_back(zeta_level(b, i));
            if (i == 0) {
                ladder.intersections.push_back(ladder.levels[0]);
            } else {
                auto meet = intersect(ladder.intersections.back(), ladder.levels.back());
                if (!meet) {
                    fail(Errc::UnresolvedComparison, "disjoint zeta enclosures");
                }
                ladder.intersections.push_back(std::move(*meet));
            }
        }
        if (ladder.intersections[i].width_at_most(tol)) {
            return ladder.intersections[i];
        }
    }
    fail(Errc::UnresolvedComparison, "zeta(" + b.get_str() + ") not resolved to the requested tolerance");
}

namespace {

bool kinds_match(SumKind sum, BoundKind bound)
{
    switch (bound) {
    case BoundKind::Thm1E1: return sum == SumKind::Frac;
    case BoundKind::Thm1E2: return sum == SumKind::FracExcludingResidue;
    case BoundKind::Cor1: return sum == SumKind::Dist;
    case BoundKind::Thm4BGreater1:
    case BoundKind::Thm4BLess1: return sum == SumKind::Power;
    }
    return false;
}

bool is_power(BoundKind kind)
{
    return kind == BoundKind::Thm4BGreater1 || kind == BoundKind::Thm4BLess1;
}

} // namespace

BoundReport verify(const SumReport& sum, const BoundValue& bound)
{
    if (!kinds_match(sum.kind, bound.kind)) {
        fail(Errc::ParameterMismatch,
             std::string(to_string(sum.kind)) + " sum checked against " + std::string(to_string(bound.kind)));
    }
    if (sum.alpha != bound.alpha || sum.N != bound.N) {
        fail(Errc::ParameterMismatch, "sum and bound differ in alpha or N");
    }
    if (is_power(bound.kind) && sum.b != bound.b) {
        fail(Errc::ParameterMismatch, "sum and bound differ in b");
    }

    BoundReport report;
    report.kind = bound.kind;
    report.alpha = sum.alpha;
    report.gamma = sum.gamma;
    report.N = sum.N;
    report.b = bound.b;
    report.K = bound.K;
    report.q_K = bound.q_K;
    report.q_K1 = bound.q_K1;
    report.bound = bound.value;
    report.sum = sum.value;
    report.verdict = mpfr_lessequal_p(sum.value.upper().get(), bound.value.lower().get()) ? Verdict::Holds
                                                                                          : Verdict::Inconclusive;
    if (mpfr_sgn(bound.value.lower().get()) > 0) {
        Float ratio(std::max(sum.value.precision(), bound.value.precision()));
        mpfr_div(ratio.get(), sum.value.upper().get(), bound.value.lower().get(), MPFR_RNDU);
        report.tightness = ratio.to_double(MPFR_RNDU);
    } else {
        report.tightness = std::numeric_limits<double>::infinity();
    }
    return report;
}

namespace {

BoundReport attempt(const IrrationalNumber& x, const Shift& gamma, std::int64_t N, BoundKind kind,
                    const mpq_class& b, double tol, mpfr_prec_t prec)
{
    switch (kind) {
    case BoundKind::Thm1E1: return verify(sum_reciprocal_frac(x, gamma, N, tol), bound_T(x, N, prec));
    case BoundKind::Thm1E2:
        return verify(sum_reciprocal_frac_excluding_residue(x, gamma, N, tol), bound_T_excluding(x, N, prec));
    case BoundKind::Cor1: return verify(sum_reciprocal_dist(x, gamma, N, tol), bound_dist(x, N, prec));
    case BoundKind::Thm4BGreater1:
    case BoundKind::Thm4BLess1: break;
    }
    if (power_bound_kind(b) != kind) {
        fail(Errc::ParameterMismatch, "b = " + b.get_str() + " does not belong to " + std::string(to_string(kind)));
    }
    return verify(sum_reciprocal_power(x, gamma, N, b, tol), bound_power(x, N, b, prec));
}

} // namespace

BoundReport check_bound(const IrrationalNumber& x, const Shift& gamma, std::int64_t N, BoundKind kind,
                        const mpq_class& b, double tol)
{
    BoundReport first = attempt(x, gamma, N, kind, b, tol, bound_precision);
    if (first.verdict == Verdict::Holds) {
        return first;
    }
    return attempt(x, gamma, N, kind, b, tol * tol, 2 * bound_precision);
}

} // namespace recip
