#include "recip/oracle.hpp"

#include <algorithm>
#include <numeric>
#include <optional>
#include <string>

#include <mpfr.h>

#include "recip/error.hpp"

namespace recip::oracle {

namespace {

constexpr unsigned long oracle_cap = 1UL << 14;

mpz_class pow2(unsigned long bits)
{
    mpz_class out;
    mpz_ui_pow_ui(out.get_mpz_t(), 2, bits);
    return out;
}

mpz_class floor_div(const mpz_class& a, const mpz_class& b)
{
    mpz_class q;
    mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return q;
}

mpz_class ceil_div(const mpz_class& a, const mpz_class& b)
{
    mpz_class q;
    mpz_cdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return q;
}

// [floor(r 2^bits), ceil(r 2^bits)]
Fixed rational_fixed(const mpq_class& lo, const mpq_class& hi, unsigned long bits)
{
    const mpz_class scale = pow2(bits);
    return {floor_div(lo.get_num() * scale, lo.get_den()), ceil_div(hi.get_num() * scale, hi.get_den()), bits};
}

Float fixed_endpoint(const mpz_class& m, unsigned long bits, mpfr_rnd_t rnd)
{
    const auto size = static_cast<mpfr_prec_t>(std::max<std::size_t>(mpz_sizeinbase(m.get_mpz_t(), 2), 2));
    Float out(size);
    mpfr_set_z(out.get(), m.get_mpz_t(), rnd);
    mpfr_div_2ui(out.get(), out.get(), bits, rnd);
    return out;
}

// nalpha - gamma ∈ [n A_lo - G_hi, n A_hi - G_lo] (n >= 0).
Fixed value_at(const Fixed& alpha, const Fixed& gamma, std::int64_t n)
{
    const mpz_class nn(static_cast<long>(n));
    return {nn * alpha.lo - gamma.hi, nn * alpha.hi - gamma.lo, alpha.bits};
}

// Fractional part, when both endpoints share an integer part and the lower
// one is not an integer.
std::optional<Fixed> frac_of(const Fixed& v)
{
    const mpz_class one = pow2(v.bits);
    const mpz_class f_lo = floor_div(v.lo, one);
    if (f_lo != floor_div(v.hi, one)) {
        return std::nullopt;
    }
    Fixed out{v.lo - f_lo * one, v.hi - f_lo * one, v.bits};
    if (out.lo == 0) {
        return std::nullopt;
    }
    return out;
}

Fixed nearest_of(const Fixed& f)
{
    const mpz_class one = pow2(f.bits);
    return {std::min<mpz_class>(f.lo, one - f.hi), std::min<mpz_class>(f.hi, one - f.lo), f.bits};
}

// Independent of the Shift code: n alpha - (u + v alpha) is an integer
// exactly when v = n and u is an integer, alpha being irrational.
std::optional<std::int64_t> hit_index(const Shift& gamma)
{
    if (!gamma.exact()) {
        return std::nullopt;
    }
    const mpq_class& u = gamma.offset();
    const mpq_class& v = gamma.alpha_coefficient();
    if (u.get_den() != 1 || v.get_den() != 1 || !v.get_num().fits_slong_p()) {
        return std::nullopt;
    }
    return v.get_num().get_si();
}

bool exact_tie(const Shift& gamma, std::int64_t n1, std::int64_t n2)
{
    if (!gamma.exact()) {
        return false;
    }
    return 2 * gamma.alpha_coefficient() == mpq_class(static_cast<long>(n1 + n2)) &&
           mpq_class(2 * gamma.offset()).get_den() == 1;
}

mpq_class min_q(const mpq_class& a, const mpq_class& b) { return a < b ? a : b; }
mpq_class max_q(const mpq_class& a, const mpq_class& b) { return a < b ? b : a; }

} // namespace

Interval Fixed::to_interval() const
{
    return Interval(fixed_endpoint(lo, bits, MPFR_RNDD), fixed_endpoint(hi, bits, MPFR_RNDU));
}

Fixed alpha_fixed(const IrrationalNumber& x, unsigned long bits)
{
    if (x.is_surd()) {
        const QuadraticSurd& s = x.surd();
        // floor(sqrt(d) 2^bits) < sqrt(d) 2^bits < that + 1, d not a square.
        mpz_class root;
        const mpz_class scaled = s.d * pow2(2 * bits);
        mpz_sqrt(root.get_mpz_t(), scaled.get_mpz_t());
        mpz_class lo = s.a * pow2(bits), hi = lo;
        if (s.b > 0) {
            lo += s.b * root;
            hi += s.b * (root + 1);
        } else {
            lo += s.b * (root + 1);
            hi += s.b * root;
        }
        if (s.c > 0) {
            return {floor_div(lo, s.c), ceil_div(hi, s.c), bits};
        }
        return {floor_div(hi, s.c), ceil_div(lo, s.c), bits};
    }

    // alpha = [a_0; ..., a_k, t] with t >= 1 lies between p_k/q_k and
    // (p_k + p_{k-1})/(q_k + q_{k-1}).
    mpz_class p_prev = 1, q_prev = 0;
    mpz_class p = *x.partial_quotient(0), q = 1;
    const mpz_class target = pow2(bits + 2);
    for (std::size_t k = 1; q * q <= target; ++k) {
        const auto a = x.partial_quotient(k);
        if (!a) {
            break;
        }
        mpz_class p_next = *a * p + p_prev;
        mpz_class q_next = *a * q + q_prev;
        p_prev = std::move(p);
        q_prev = std::move(q);
        p = std::move(p_next);
        q = std::move(q_next);
    }
    const mpq_class end1(p, q);
    const mpq_class end2(p + p_prev, q + q_prev);
    return rational_fixed(min_q(end1, end2), max_q(end1, end2), bits);
}

Fixed shift_fixed(const IrrationalNumber& x, const Shift& gamma, unsigned long bits)
{
    if (!gamma.exact()) {
        mpq_class radius(1);
        mpz_mul_2exp(radius.get_den_mpz_t(), radius.get_den_mpz_t(), gamma.radius_bits());
        radius.canonicalize();
        return rational_fixed(gamma.offset() - radius, gamma.offset() + radius, bits);
    }
    Fixed out = rational_fixed(gamma.offset(), gamma.offset(), bits);
    const mpq_class& v = gamma.alpha_coefficient();
    if (v == 0) {
        return out;
    }
    // v alpha with v = num/den, den > 0.
    const Fixed alpha = alpha_fixed(x, bits + 4);
    mpz_class lo = v.get_num() * alpha.lo, hi = v.get_num() * alpha.hi;
    if (v < 0) {
        std::swap(lo, hi);
    }
    const mpz_class den = v.get_den() * 16;
    out.lo += floor_div(lo, den);
    out.hi += ceil_div(hi, den);
    return out;
}

namespace {

std::vector<std::pair<std::int64_t, Fixed>> points_at(const IrrationalNumber& x, std::int64_t N, unsigned long bits,
                                                      bool& resolved)
{
    const Fixed alpha = alpha_fixed(x, bits);
    const Fixed zero{0, 0, bits};
    std::vector<std::pair<std::int64_t, Fixed>> points;
    points.reserve(static_cast<std::size_t>(N));
    resolved = true;
    for (std::int64_t n = 1; n <= N; ++n) {
        auto f = frac_of(value_at(alpha, zero, n));
        if (!f) {
            resolved = false;
            return {};
        }
        points.emplace_back(n, std::move(*f));
    }
    std::sort(points.begin(), points.end(), [](const auto& l, const auto& r) { return l.second.lo < r.second.lo; });
    for (std::size_t i = 1; i < points.size(); ++i) {
        if (points[i - 1].second.hi >= points[i].second.lo) {
            resolved = false;
            return {};
        }
    }
    return points;
}

std::vector<std::pair<std::int64_t, Fixed>> certified_points(const IrrationalNumber& x, std::int64_t N,
                                                             const OracleConfig& cfg)
{
    if (N < 1) {
        fail(Errc::DomainError, "N must be at least 1");
    }
    for (unsigned long bits = std::max(cfg.precision_bits, 128UL); bits <= oracle_cap; bits *= 2) {
        bool resolved = false;
        auto points = points_at(x, N, bits, resolved);
        if (resolved) {
            return points;
        }
    }
    fail(Errc::UnresolvedComparison, "oracle could not separate the points of " + x.label());
}

} // namespace

std::vector<Point> sorted_points(const IrrationalNumber& x, std::int64_t N, const OracleConfig& cfg)
{
    std::vector<Point> out;
    for (const auto& [n, f] : certified_points(x, N, cfg)) {
        out.push_back({n, f.to_interval()});
    }
    return out;
}

std::vector<Interval> gap_multiset(const IrrationalNumber& x, std::int64_t N, const OracleConfig& cfg)
{
    const auto points = certified_points(x, N, cfg);
    const unsigned long bits = points.front().second.bits;
    std::vector<Interval> out;
    out.reserve(points.size() + 1);
    mpz_class prev_lo = 0, prev_hi = 0;
    for (const auto& [n, f] : points) {
        out.push_back(Fixed{f.lo - prev_hi, f.hi - prev_lo, bits}.to_interval());
        prev_lo = f.lo;
        prev_hi = f.hi;
    }
    const mpz_class one = pow2(bits);
    out.push_back(Fixed{one - prev_hi, one - prev_lo, bits}.to_interval());
    return out;
}

std::vector<GapValue> distinct_values(const std::vector<Interval>& values)
{
    std::vector<std::size_t> order(values.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t l, std::size_t r) {
        return compare(values[l].lower(), values[r].lower()) < 0;
    });
    std::vector<GapValue> groups;
    std::vector<Interval> members; // hull of each group
    for (std::size_t i : order) {
        const Interval& v = values[i];
        if (!groups.empty() && members.back().overlaps(v)) {
            // Every member must overlap every other, or the grouping is ambiguous.
            if (!groups.back().value.overlaps(v)) {
                fail(Errc::UnresolvedComparison, "gap enclosures chain without a common point");
            }
            members.back() = hull(members.back(), v);
            groups.back().value = *intersect(groups.back().value, v);
            ++groups.back().multiplicity;
        } else {
            groups.push_back({v, 1});
            members.push_back(v);
        }
    }
    return groups;
}

mpz_class largest_denominator(const IrrationalNumber& x, std::int64_t N)
{
    const mpz_class bound(static_cast<long>(N));
    mpz_class q_prev = 0, q = 1;
    for (std::size_t k = 1;; ++k) {
        const auto a = x.partial_quotient(k);
        if (!a) {
            fail(Errc::InsufficientDigits, "digits of " + x.label() + " run out");
        }
        mpz_class q_next = *a * q + q_prev;
        if (q_next > bound) {
            return q;
        }
        q_prev = std::move(q);
        q = std::move(q_next);
    }
}

namespace {

bool is_integer(const mpq_class& v) { return v.get_den() == 1 && v.get_num().fits_ulong_p(); }

// [lo, hi] / 2^bits of 1 / (n^a f^b) for f = [f_lo, f_hi] / 2^bits > 0.
void term(const Fixed& f, std::int64_t n, const mpq_class& a, const mpq_class& b, mpz_class& lo, mpz_class& hi)
{
    const unsigned long bits = f.bits;
    if (is_integer(a) && is_integer(b)) {
        const unsigned long ai = a.get_num().get_ui(), bi = b.get_num().get_ui();
        // 2^{bits (b + 1)} / (f^b n^a)
        mpz_class f_lo_b, f_hi_b, n_a;
        mpz_pow_ui(f_lo_b.get_mpz_t(), f.lo.get_mpz_t(), bi);
        mpz_pow_ui(f_hi_b.get_mpz_t(), f.hi.get_mpz_t(), bi);
        mpz_ui_pow_ui(n_a.get_mpz_t(), static_cast<unsigned long>(n), ai);
        const mpz_class num = pow2(bits * (bi + 1));
        lo = floor_div(num, f_hi_b * n_a);
        hi = ceil_div(num, f_lo_b * n_a);
        return;
    }
    const auto prec = static_cast<mpfr_prec_t>(2 * bits + 64);
    Float e_lo(prec), e_hi(prec), w_lo(prec), w_hi(prec), base(prec), t(prec), best_lo(prec), best_hi(prec);
    // Corners of f^{-b} over f in [f_lo, f_hi], b in [b_lo, b_hi].
    mpfr_set_q(e_lo.get(), b.get_mpq_t(), MPFR_RNDD);
    mpfr_set_q(e_hi.get(), b.get_mpq_t(), MPFR_RNDU);
    mpfr_neg(e_lo.get(), e_lo.get(), MPFR_RNDN);
    mpfr_neg(e_hi.get(), e_hi.get(), MPFR_RNDN);
    bool first = true;
    for (const mpz_class* m : {&f.lo, &f.hi}) {
        mpfr_set_z(base.get(), m->get_mpz_t(), MPFR_RNDN); // exact: prec exceeds bits + 2
        mpfr_div_2ui(base.get(), base.get(), bits, MPFR_RNDN);
        for (mpfr_srcptr e : {static_cast<mpfr_srcptr>(e_lo.get()), static_cast<mpfr_srcptr>(e_hi.get())}) {
            mpfr_pow(t.get(), base.get(), e, MPFR_RNDD);
            if (first || mpfr_less_p(t.get(), best_lo.get())) {
                mpfr_set(best_lo.get(), t.get(), MPFR_RNDD);
            }
            mpfr_pow(t.get(), base.get(), e, MPFR_RNDU);
            if (first || mpfr_greater_p(t.get(), best_hi.get())) {
                mpfr_set(best_hi.get(), t.get(), MPFR_RNDU);
            }
            first = false;
        }
    }
    // n^a, n >= 1.
    mpfr_set_q(e_lo.get(), a.get_mpq_t(), MPFR_RNDD);
    mpfr_set_q(e_hi.get(), a.get_mpq_t(), MPFR_RNDU);
    mpfr_set_si(base.get(), static_cast<long>(n), MPFR_RNDN);
    mpfr_pow(w_lo.get(), base.get(), e_lo.get(), MPFR_RNDD);
    mpfr_pow(w_hi.get(), base.get(), e_hi.get(), MPFR_RNDU);
    mpfr_div(best_lo.get(), best_lo.get(), w_hi.get(), MPFR_RNDD);
    mpfr_div(best_hi.get(), best_hi.get(), w_lo.get(), MPFR_RNDU);

    mpfr_mul_2ui(best_lo.get(), best_lo.get(), bits, MPFR_RNDD);
    mpfr_mul_2ui(best_hi.get(), best_hi.get(), bits, MPFR_RNDU);
    mpfr_get_z(lo.get_mpz_t(), best_lo.get(), MPFR_RNDD);
    mpfr_get_z(hi.get_mpz_t(), best_hi.get(), MPFR_RNDU);
}

struct Attempt {
    bool resolved = false;
    BruteSum result;
};

Attempt brute_at(const IrrationalNumber& x, const Shift& gamma, std::int64_t N, const mpq_class& a,
                 const mpq_class& b, const BruteOptions& opts, unsigned long bits, bool at_cap)
{
    const Fixed alpha = alpha_fixed(x, bits);
    const Fixed shift = shift_fixed(x, gamma, bits);
    const auto hit = hit_index(gamma);

    // f(n) for every n, or nullopt for the exact hit.
    std::vector<std::optional<Fixed>> f(static_cast<std::size_t>(N + 1));
    std::optional<std::int64_t> hit_n;
    for (std::int64_t n = 0; n <= N; ++n) {
        if (hit && *hit == n) {
            hit_n = n;
            continue;
        }
        auto frac = frac_of(value_at(alpha, shift, n));
        if (!frac) {
            return {};
        }
        f[static_cast<std::size_t>(n)] = opts.nearest ? nearest_of(*frac) : std::move(*frac);
    }

    Attempt out;
    if (hit_n) {
        out.result.excluded = *hit_n;
        out.result.exact_hit = true;
    } else {
        std::int64_t best = 0;
        for (std::int64_t n = 1; n <= N; ++n) {
            if (f[static_cast<std::size_t>(n)]->lo < f[static_cast<std::size_t>(best)]->lo) {
                best = n;
            }
        }
        const Fixed& fb = *f[static_cast<std::size_t>(best)];
        std::int64_t winner = best;
        for (std::int64_t n = 0; n <= N; ++n) {
            if (n == best || f[static_cast<std::size_t>(n)]->lo > fb.hi) {
                continue;
            }
            if (!exact_tie(gamma, n, best) && !at_cap) {
                return {};
            }
            winner = std::min(winner, n);
        }
        out.result.excluded = winner;
    }

    std::int64_t modulus = opts.residue_modulus;
    if (opts.use_own_modulus) {
        modulus = largest_denominator(x, N).get_si();
    }
    out.result.modulus = modulus;

    mpz_class sum_lo = 0, sum_hi = 0, lo, hi;
    for (std::int64_t n = opts.first; n <= N; ++n) {
        const std::int64_t diff = n - out.result.excluded;
        if (modulus > 0 ? diff % modulus == 0 : diff == 0) {
            continue;
        }
        const auto& fn = f[static_cast<std::size_t>(n)];
        if (!fn) {
            return {};
        }
        term(*fn, n, a, b, lo, hi);
        sum_lo += lo;
        sum_hi += hi;
    }
    out.result.value = Fixed{sum_lo, sum_hi, bits}.to_interval();
    out.resolved = out.result.value.width_at_most(opts.tol);
    return out;
}

} // namespace

BruteSum sum_brute(const IrrationalNumber& x, const Shift& gamma, std::int64_t N, const mpq_class& a,
                   const mpq_class& b, const OracleConfig& cfg, const BruteOptions& opts)
{
    if (N < 1) {
        fail(Errc::DomainError, "N must be at least 1");
    }
    if (b <= 0 || a < 0) {
        fail(Errc::DomainError, "oracle needs a >= 0 and b > 0");
    }
    for (unsigned long bits = std::max(cfg.precision_bits, 128UL); bits <= oracle_cap; bits *= 2) {
        Attempt attempt = brute_at(x, gamma, N, a, b, opts, bits, bits * 2 > oracle_cap);
        if (attempt.resolved) {
            return attempt.result;
        }
    }
    fail(Errc::UnresolvedComparison, "oracle sum unresolved for " + x.label() + ", gamma = " + gamma.label());
}

} // namespace recip::oracle
