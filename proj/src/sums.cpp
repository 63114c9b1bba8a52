#include "recip/sums.hpp"

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "recip/cf.hpp"
#include "recip/detail/frac_kernel.hpp"
#include "recip/error.hpp"
#include "recip/three_gap.hpp"

namespace recip {

using detail::FracKernel;

std::string_view to_string(SumKind kind)
{
    switch (kind) {
    case SumKind::Frac: return "frac";
    case SumKind::FracExcludingResidue: return "frac-excluding-residue";
    case SumKind::Dist: return "dist";
    case SumKind::Power: return "power";
    case SumKind::General: return "general";
    }
    return "?";
}

namespace {

mpfr_prec_t bit_length(std::int64_t v)
{
    mpfr_prec_t bits = 1;
    while (v > 1) {
        v >>= 1;
        ++bits;
    }
    return bits;
}

void check_N(std::int64_t N)
{
    if (N < 1) {
        fail(Errc::DomainError, "N must be at least 1");
    }
}

std::string where(const IrrationalNumber& x, const Shift& gamma, std::int64_t n)
{
    return "term n = " + std::to_string(n) + " of alpha = " + x.label() + ", gamma = " + gamma.label();
}

// Raises when doubling `bits` cannot help any more.
void advance_or_raise(const FracKernel& kernel, mpfr_prec_t bits, const std::string& what)
{
    if (kernel.limit() != FracKernel::Limit::Precision || bits * 2 > precision_cap()) {
        detail::raise_unresolved(kernel, what);
    }
}

// ||x|| from an enclosure [lo, hi] of {x}: [min(lo, 1 - hi), min(hi, 1 - lo)].
void nearest_distance(mpfr_ptr lo, mpfr_ptr hi, mpfr_ptr from_hi, mpfr_ptr from_lo)
{
    mpfr_ui_sub(from_hi, 1, hi, MPFR_RNDD);
    mpfr_ui_sub(from_lo, 1, lo, MPFR_RNDU);
    if (mpfr_less_p(from_hi, lo)) {
        mpfr_set(lo, from_hi, MPFR_RNDD);
    }
    if (mpfr_less_p(from_lo, hi)) {
        mpfr_set(hi, from_lo, MPFR_RNDU);
    }
}

// x^(sign * e) for an exponent given as a rational, evaluated with outward
// rounding on positive bases.
class Power {
public:
    Power(const mpq_class& exponent, int sign, mpfr_prec_t prec)
        : sign_(sign), e_lo_(prec), e_hi_(prec), t_(prec)
    {
        if (exponent == 1) {
            shape_ = Shape::One;
        } else if (exponent.get_den() == 1 && exponent.get_num().fits_ulong_p()) {
            shape_ = Shape::Integer;
            integer_ = exponent.get_num().get_ui();
        } else if (exponent == mpq_class(1, 2)) {
            shape_ = Shape::Half;
        } else {
            shape_ = Shape::General;
            const mpq_class signed_exponent = sign * exponent;
            mpfr_set_q(e_lo_.get(), signed_exponent.get_mpq_t(), MPFR_RNDD);
            mpfr_set_q(e_hi_.get(), signed_exponent.get_mpq_t(), MPFR_RNDU);
        }
    }

    // [out_lo, out_hi] encloses [lo, hi]^(sign * exponent); lo > 0. Outputs
    // must not alias inputs.
    void apply(mpfr_srcptr lo, mpfr_srcptr hi, mpfr_ptr out_lo, mpfr_ptr out_hi)
    {
        switch (shape_) {
        case Shape::One:
            if (sign_ < 0) {
                mpfr_ui_div(out_lo, 1, hi, MPFR_RNDD);
                mpfr_ui_div(out_hi, 1, lo, MPFR_RNDU);
            } else {
                mpfr_set(out_lo, lo, MPFR_RNDD);
                mpfr_set(out_hi, hi, MPFR_RNDU);
            }
            return;
        case Shape::Integer:
            if (sign_ < 0) {
                mpfr_pow_ui(t_.get(), hi, integer_, MPFR_RNDU);
                mpfr_ui_div(out_lo, 1, t_.get(), MPFR_RNDD);
                mpfr_pow_ui(t_.get(), lo, integer_, MPFR_RNDD);
                mpfr_ui_div(out_hi, 1, t_.get(), MPFR_RNDU);
            } else {
                mpfr_pow_ui(out_lo, lo, integer_, MPFR_RNDD);
                mpfr_pow_ui(out_hi, hi, integer_, MPFR_RNDU);
            }
            return;
        case Shape::Half:
            if (sign_ < 0) {
                mpfr_rec_sqrt(out_lo, hi, MPFR_RNDD);
                mpfr_rec_sqrt(out_hi, lo, MPFR_RNDU);
            } else {
                mpfr_sqrt(out_lo, lo, MPFR_RNDD);
                mpfr_sqrt(out_hi, hi, MPFR_RNDU);
            }
            return;
        case Shape::General:
            general(lo, hi, out_lo, out_hi);
            return;
        }
    }

private:
    enum class Shape { One, Integer, Half, General };

    void general(mpfr_srcptr lo, mpfr_srcptr hi, mpfr_ptr out_lo, mpfr_ptr out_hi)
    {
        bool first = true;
        for (mpfr_srcptr base : {lo, hi}) {
            for (mpfr_srcptr e : {static_cast<mpfr_srcptr>(e_lo_.get()), static_cast<mpfr_srcptr>(e_hi_.get())}) {
                mpfr_pow(t_.get(), base, e, MPFR_RNDD);
                if (first || mpfr_less_p(t_.get(), out_lo)) {
                    mpfr_set(out_lo, t_.get(), MPFR_RNDD);
                }
                mpfr_pow(t_.get(), base, e, MPFR_RNDU);
                if (first || mpfr_greater_p(t_.get(), out_hi)) {
                    mpfr_set(out_hi, t_.get(), MPFR_RNDU);
                }
                first = false;
            }
        }
    }

    Shape shape_ = Shape::One;
    int sign_;
    unsigned long integer_ = 1;
    Float e_lo_, e_hi_, t_;
};

struct SumPlan {
    SumKind kind;
    bool nearest = false;
    std::int64_t first = 0;
    std::int64_t excluded = 0;
    std::int64_t modulus = 0; // 0: exclude only `excluded`
    mpq_class a = 0;
    mpq_class b = 1;
};

bool skipped(const SumPlan& plan, std::int64_t n)
{
    if (plan.modulus > 0) {
        const std::int64_t diff = n - plan.excluded;
        return diff % plan.modulus == 0;
    }
    return n == plan.excluded;
}

Interval run_sum(const IrrationalNumber& x, const Shift& gamma, std::int64_t N, const SumPlan& plan, double tol,
                 std::int64_t& term_count)
{
    // Levels are intersected as they come, so a smaller tol only adds
    // levels and its result is a subset of the one for a larger tol.
    const mpfr_prec_t start = initial_precision + 2 * bit_length(N);
    std::optional<Interval> met;
    for (mpfr_prec_t bits = start;; bits *= 2) {
        FracKernel kernel(x, gamma, bits, N);
        const mpfr_prec_t prec = kernel.precision() + 32;
        Float t_lo(prec), t_hi(prec), r_lo(prec), r_hi(prec), w_lo(prec), w_hi(prec), scratch(prec), scratch2(prec),
            n_value(prec);
        Float sum_lo(prec), sum_hi(prec);
        Power frac_power(plan.b, -1, prec);
        Power weight_power(plan.a, 1, prec);
        const bool weighted = plan.a != 0;

        std::optional<std::int64_t> failed_at;
        std::int64_t count = 0;
        for (std::int64_t n = plan.first; n <= N; ++n) {
            if (skipped(plan, n)) {
                continue;
            }
            const auto status = kernel.eval(n);
            if (status != FracKernel::Status::Ok) {
                // Only the excluded index can be an exact hit; anything else is unresolved.
                failed_at = n;
                break;
            }
            mpfr_set(t_lo.get(), kernel.lower(), MPFR_RNDD);
            mpfr_set(t_hi.get(), kernel.upper(), MPFR_RNDU);
            if (plan.nearest) {
                nearest_distance(t_lo.get(), t_hi.get(), scratch.get(), scratch2.get());
            }
            frac_power.apply(t_lo.get(), t_hi.get(), r_lo.get(), r_hi.get());
            if (weighted) {
                mpfr_set_si(n_value.get(), static_cast<long>(n), MPFR_RNDN);
                weight_power.apply(n_value.get(), n_value.get(), w_lo.get(), w_hi.get());
                mpfr_div(r_lo.get(), r_lo.get(), w_hi.get(), MPFR_RNDD);
                mpfr_div(r_hi.get(), r_hi.get(), w_lo.get(), MPFR_RNDU);
            }
            mpfr_add(sum_lo.get(), sum_lo.get(), r_lo.get(), MPFR_RNDD);
            mpfr_add(sum_hi.get(), sum_hi.get(), r_hi.get(), MPFR_RNDU);
            ++count;
        }
        if (!failed_at) {
            Interval total(std::move(sum_lo), std::move(sum_hi));
            if (met) {
                auto both = intersect(*met, total);
                if (!both) {
                    fail(Errc::UnresolvedComparison, "disjoint sum enclosures for alpha = " + x.label());
                }
                total = std::move(*both);
            }
            met = total;
            if (total.width_at_most(tol)) {
                term_count = count;
                return total;
            }
        }
        advance_or_raise(kernel, bits,
                         failed_at ? where(x, gamma, *failed_at)
                                   : "sum for alpha = " + x.label() + " wider than tolerance");
    }
}

// Lowest-lower-endpoint tracking for the certified minimum of a scan.
struct MinTracker {
    explicit MinTracker(mpfr_prec_t prec) : best_lo(prec), best_hi(prec), second_lo(prec) {}

    void offer(std::int64_t n, mpfr_srcptr lo, mpfr_srcptr hi)
    {
        if (!best || mpfr_less_p(lo, best_lo.get())) {
            if (best) {
                mpfr_set(second_lo.get(), best_lo.get(), MPFR_RNDD);
                has_second = true;
            }
            best = n;
            mpfr_set(best_lo.get(), lo, MPFR_RNDD);
            mpfr_set(best_hi.get(), hi, MPFR_RNDU);
        } else if (!has_second || mpfr_less_p(lo, second_lo.get())) {
            mpfr_set(second_lo.get(), lo, MPFR_RNDD);
            has_second = true;
        }
    }

    std::optional<std::int64_t> best;
    Float best_lo, best_hi, second_lo;
    bool has_second = false;
};

// {n1 alpha - gamma} + {n2 alpha - gamma} = 1 exactly, which makes the two
// nearest-integer distances equal.
bool exact_distance_tie(const Shift& gamma, std::int64_t n1, std::int64_t n2)
{
    if (!gamma.exact()) {
        return false;
    }
    const mpq_class twice_v = 2 * gamma.alpha_coefficient();
    const mpq_class twice_u = 2 * gamma.offset();
    return twice_v == mpq_class(static_cast<long>(n1 + n2)) && twice_u.get_den() == 1;
}

} // namespace

Argmin argmin_frac(const IrrationalNumber& x, const Shift& gamma, std::int64_t N)
{
    check_N(N);
    for (mpfr_prec_t bits = initial_precision;; bits *= 2) {
        FracKernel kernel(x, gamma, bits, N);
        MinTracker tracker(kernel.precision());
        std::optional<std::int64_t> failed_at;
        for (std::int64_t n = 0; n <= N; ++n) {
            const auto status = kernel.eval(n);
            if (status == FracKernel::Status::ExactZero) {
                return Argmin{n, true, Interval::point(0)};
            }
            if (status == FracKernel::Status::Unresolved) {
                failed_at = n;
                break;
            }
            tracker.offer(n, kernel.lower(), kernel.upper());
        }
        if (!failed_at && (!tracker.has_second || mpfr_less_p(tracker.best_hi.get(), tracker.second_lo.get()))) {
            return Argmin{*tracker.best, false, Interval(tracker.best_lo, tracker.best_hi)};
        }
        advance_or_raise(kernel, bits,
                         failed_at ? where(x, gamma, *failed_at) : "minimum of {n alpha - gamma} not separated");
    }
}

Argmin argmin_dist(const IrrationalNumber& x, const Shift& gamma, std::int64_t N)
{
    check_N(N);
    for (mpfr_prec_t bits = initial_precision;; bits *= 2) {
        FracKernel kernel(x, gamma, bits, N);
        const mpfr_prec_t prec = kernel.precision();
        Float lo(prec), hi(prec), scratch(prec), scratch2(prec);
        MinTracker tracker(prec);
        std::optional<std::int64_t> failed_at;
        for (std::int64_t n = 0; n <= N; ++n) {
            const auto status = kernel.eval(n);
            if (status == FracKernel::Status::ExactZero) {
                return Argmin{n, true, Interval::point(0)};
            }
            if (status == FracKernel::Status::Unresolved) {
                failed_at = n;
                break;
            }
            mpfr_set(lo.get(), kernel.lower(), MPFR_RNDD);
            mpfr_set(hi.get(), kernel.upper(), MPFR_RNDU);
            nearest_distance(lo.get(), hi.get(), scratch.get(), scratch2.get());
            tracker.offer(n, lo.get(), hi.get());
        }
        if (!failed_at) {
            if (!tracker.has_second || mpfr_less_p(tracker.best_hi.get(), tracker.second_lo.get())) {
                return Argmin{*tracker.best, false, Interval(tracker.best_lo, tracker.best_hi)};
            }
            // Overlapping candidates are acceptable only if each ties the best exactly.
            std::int64_t winner = *tracker.best;
            bool all_ties = true;
            for (std::int64_t n = 0; n <= N && all_ties; ++n) {
                if (n == *tracker.best) {
                    continue;
                }
                kernel.eval(n);
                mpfr_set(lo.get(), kernel.lower(), MPFR_RNDD);
                mpfr_set(hi.get(), kernel.upper(), MPFR_RNDU);
                nearest_distance(lo.get(), hi.get(), scratch.get(), scratch2.get());
                if (mpfr_lessequal_p(lo.get(), tracker.best_hi.get())) {
                    if (exact_distance_tie(gamma, n, *tracker.best)) {
                        winner = std::min(winner, n);
                    } else {
                        all_ties = false;
                    }
                }
            }
            if (all_ties) {
                return Argmin{winner, false, Interval(tracker.best_lo, tracker.best_hi)};
            }
        }
        advance_or_raise(kernel, bits,
                         failed_at ? where(x, gamma, *failed_at) : "minimum of ||n alpha - gamma|| not separated");
    }
}

namespace {

SumReport make_report(SumKind kind, const IrrationalNumber& x, const Shift& gamma, std::int64_t N, double tol)
{
    if (!(tol > 0)) {
        fail(Errc::DomainError, "tolerance must be positive");
    }
    SumReport report;
    report.kind = kind;
    report.alpha = x.label();
    report.gamma = gamma.label();
    report.N = N;
    report.tol = tol;
    return report;
}

SumReport frac_family(SumKind kind, const IrrationalNumber& x, const Shift& gamma, std::int64_t N,
                      const mpq_class& a, const mpq_class& b, double tol)
{
    check_N(N);
    SumReport report = make_report(kind, x, gamma, N, tol);
    report.a = a;
    report.b = b;
    const Argmin min = argmin_frac(x, gamma, N);
    report.excluded = min.index;
    report.exact_hit = min.exact_hit;
    report.exclusion = "n' minimises {n alpha - gamma}";

    SumPlan plan{kind};
    plan.excluded = min.index;
    plan.a = a;
    plan.b = b;
    if (kind == SumKind::FracExcludingResidue) {
        const std::size_t K = largest_convergent_index(x, N);
        plan.modulus = convergent_fraction(x, K).q.get_si();
        report.modulus = plan.modulus;
        report.exclusion = "n = n' (mod q_K) with K = " + std::to_string(K);
    }
    if (kind == SumKind::General) {
        plan.first = 1;
    }
    report.value = run_sum(x, gamma, N, plan, tol, report.term_count);
    return report;
}

} // namespace

SumReport sum_reciprocal_frac(const IrrationalNumber& x, const Shift& gamma, std::int64_t N, double tol)
{
    return frac_family(SumKind::Frac, x, gamma, N, 0, 1, tol);
}

SumReport sum_reciprocal_frac_excluding_residue(const IrrationalNumber& x, const Shift& gamma, std::int64_t N,
                                                double tol)
{
    return frac_family(SumKind::FracExcludingResidue, x, gamma, N, 0, 1, tol);
}

SumReport sum_reciprocal_power(const IrrationalNumber& x, const Shift& gamma, std::int64_t N, const mpq_class& b,
                               double tol)
{
    if (b <= 0) {
        fail(Errc::DomainError, "exponent b must be positive");
    }
    if (b == 1) {
        return sum_reciprocal_frac(x, gamma, N, tol);
    }
    return frac_family(SumKind::Power, x, gamma, N, 0, b, tol);
}

SumReport sum_general(const IrrationalNumber& x, const Shift& gamma, std::int64_t N, const mpq_class& a,
                      const mpq_class& b, double tol)
{
    if (a < 0) {
        fail(Errc::DomainError, "exponent a must be non-negative");
    }
    if (b <= 0) {
        fail(Errc::DomainError, "exponent b must be positive");
    }
    return frac_family(SumKind::General, x, gamma, N, a, b, tol);
}

SumReport sum_reciprocal_dist(const IrrationalNumber& x, const Shift& gamma, std::int64_t N, double tol)
{
    check_N(N);
    SumReport report = make_report(SumKind::Dist, x, gamma, N, tol);
    const Argmin min = argmin_dist(x, gamma, N);
    report.excluded = min.index;
    report.exact_hit = min.exact_hit;
    report.exclusion = "n* minimises ||n alpha - gamma||";
    SumPlan plan{SumKind::Dist};
    plan.nearest = true;
    plan.excluded = min.index;
    report.value = run_sum(x, gamma, N, plan, tol, report.term_count);
    return report;
}

namespace {

// floor(gamma), certified.
mpz_class floor_of(const IrrationalNumber& x, const Shift& gamma)
{
    if (gamma.exact() && gamma.alpha_coefficient() == 0) {
        mpz_class out;
        mpz_fdiv_q(out.get_mpz_t(), gamma.offset().get_num_mpz_t(), gamma.offset().get_den_mpz_t());
        return out;
    }
    for (mpfr_prec_t prec = initial_precision; prec <= precision_cap(); prec *= 2) {
        const Interval g = gamma.enclose(x, prec);
        Float lo(g.precision()), hi(g.precision());
        mpfr_floor(lo.get(), g.lower().get());
        mpfr_floor(hi.get(), g.upper().get());
        if (mpfr_equal_p(lo.get(), hi.get())) {
            mpz_class out;
            mpfr_get_z(out.get_mpz_t(), lo.get(), MPFR_RNDN);
            return out;
        }
        if (!gamma.exact() || !x.refinable()) {
            break;
        }
    }
    fail(Errc::UnresolvedComparison, "cannot certify the integer part of gamma = " + gamma.label());
}

// -1, 0, +1 for {n alpha} compared with gamma in [0, 1).
int compare_point(const IrrationalNumber& x, std::int64_t n, const Shift& gamma)
{
    if (const auto hit = gamma.integer_hit_index(); hit && *hit == static_cast<long>(n)) {
        return 0;
    }
    const Shift zero = Shift::rational(0);
    for (mpfr_prec_t bits = initial_precision;; bits *= 2) {
        FracKernel point(x, zero, bits, n);
        const Interval g = gamma.enclose(x, bits + 8);
        if (n == 0) {
            if (g.certainly_positive()) {
                return -1;
            }
        } else if (point.eval(n) == FracKernel::Status::Ok) {
            const Interval p = point.value();
            if (p.certainly_less(g)) {
                return -1;
            }
            if (g.certainly_less(p)) {
                return 1;
            }
        }
        FracKernel probe(x, gamma, bits, n);
        advance_or_raise(probe, bits, "comparison of {" + std::to_string(n) + " alpha} with gamma");
    }
}

} // namespace

SemiHomogeneous reduce_to_semihomogeneous(const IrrationalNumber& x, const Shift& gamma, std::int64_t N)
{
    check_N(N);
    const Shift reduced = gamma.plus_integer(-floor_of(x, gamma));
    if (reduced.exact() && reduced.alpha_coefficient() == 0 && reduced.offset() == 0) {
        return {};
    }

    const auto order = permutation(x, N);
    // Largest l in [0, N] with {n_l alpha} < gamma, where n_0 = 0 < gamma.
    std::int64_t lo = 0, hi = N;
    while (lo < hi) {
        const std::int64_t mid = lo + (hi - lo + 1) / 2;
        if (compare_point(x, order[static_cast<std::size_t>(mid - 1)], reduced) < 0) {
            lo = mid;
        } else {
            hi = mid - 1;
        }
    }
    if (lo == N) {
        return {};
    }
    const std::int64_t n_prime = order[static_cast<std::size_t>(lo)];
    // {n' alpha} = n' alpha - floor(n' alpha), kept exact as a linear combination.
    const mpz_class whole = floor_of(x, Shift::linear_combination(0, mpq_class(static_cast<long>(n_prime))));
    return {n_prime, Shift::linear_combination(mpq_class(-whole), mpq_class(static_cast<long>(n_prime)))};
}

} // namespace recip
