#include "recip/interval.hpp"

#include <algorithm>
#include <array>
#include <cstdlib>
#include <string>

#include "recip/error.hpp"

namespace recip {

mpfr_prec_t precision_cap()
{
    static const mpfr_prec_t cap = [] {
        mpfr_prec_t value = mpfr_prec_t{1} << 16;
        if (const char* env = std::getenv("RECIP_PRECISION_CAP")) {
            char* end = nullptr;
            const long long parsed = std::strtoll(env, &end, 10);
            if (end != env && *end == '\0' && parsed >= initial_precision
                && parsed <= static_cast<long long>(MPFR_PREC_MAX)) {
                value = static_cast<mpfr_prec_t>(parsed);
            }
        }
        return value;
    }();
    return cap;
}

Float::Float(mpfr_prec_t prec)
{
    mpfr_init2(value_, prec);
    mpfr_set_zero(value_, 1);
}

Float::Float(const Float& other)
{
    mpfr_init2(value_, other.precision());
    mpfr_set(value_, other.value_, MPFR_RNDN);
}

Float::Float(Float&& other) noexcept
{
    mpfr_init2(value_, MPFR_PREC_MIN);
    mpfr_swap(value_, other.value_);
}

Float& Float::operator=(const Float& other)
{
    if (this != &other) {
        mpfr_set_prec(value_, other.precision());
        mpfr_set(value_, other.value_, MPFR_RNDN);
    }
    return *this;
}

Float& Float::operator=(Float&& other) noexcept
{
    mpfr_swap(value_, other.value_);
    return *this;
}

Float::~Float()
{
    mpfr_clear(value_);
}

Float Float::exact(long value, mpfr_prec_t prec)
{
    Float f(std::max<mpfr_prec_t>(prec, 64));
    mpfr_set_si(f.get(), value, MPFR_RNDN);
    return f;
}

double Float::to_double(mpfr_rnd_t rnd) const
{
    return mpfr_get_d(value_, rnd);
}

std::string Float::to_decimal(int digits, mpfr_rnd_t rnd) const
{
    char* buffer = nullptr;
    mpfr_asprintf(&buffer, "%.*R*g", digits, rnd, value_);
    std::string out(buffer);
    mpfr_free_str(buffer);
    return out;
}

int compare(const Float& a, const Float& b)
{
    return mpfr_cmp(a.get(), b.get());
}

namespace {

mpfr_prec_t joint_precision(const Interval& a, const Interval& b)
{
    return std::max(a.precision(), b.precision());
}

// Applies `op(out, x, y, rnd)` at the four endpoint combinations and keeps
// the extremes.
template <typename Op>
Interval corners(const Interval& a, const Interval& b, mpfr_prec_t prec, Op op)
{
    std::array<const Float*, 2> xs{&a.lower(), &a.upper()};
    std::array<const Float*, 2> ys{&b.lower(), &b.upper()};
    Float lo(prec), hi(prec), t(prec);
    bool first = true;
    for (const Float* x : xs) {
        for (const Float* y : ys) {
            op(t.get(), x->get(), y->get(), MPFR_RNDD);
            if (first || mpfr_less_p(t.get(), lo.get())) {
                mpfr_set(lo.get(), t.get(), MPFR_RNDN);
            }
            op(t.get(), x->get(), y->get(), MPFR_RNDU);
            if (first || mpfr_greater_p(t.get(), hi.get())) {
                mpfr_set(hi.get(), t.get(), MPFR_RNDN);
            }
            first = false;
        }
    }
    return Interval(std::move(lo), std::move(hi));
}

} // namespace

Interval::Interval(Float lower, Float upper) : lower_(std::move(lower)), upper_(std::move(upper))
{
    if (mpfr_nan_p(lower_.get()) || mpfr_nan_p(upper_.get())) {
        fail(Errc::DomainError, "interval endpoint is NaN");
    }
    if (mpfr_greater_p(lower_.get(), upper_.get())) {
        fail(Errc::DomainError, "interval lower endpoint exceeds upper endpoint");
    }
}

Interval Interval::point(long value, mpfr_prec_t prec)
{
    return Interval(Float::exact(value, prec), Float::exact(value, prec));
}

Interval Interval::of(const mpz_class& value, mpfr_prec_t prec)
{
    Float lo(prec), hi(prec);
    mpfr_set_z(lo.get(), value.get_mpz_t(), MPFR_RNDD);
    mpfr_set_z(hi.get(), value.get_mpz_t(), MPFR_RNDU);
    return Interval(std::move(lo), std::move(hi));
}

Interval Interval::of(const mpq_class& value, mpfr_prec_t prec)
{
    Float lo(prec), hi(prec);
    mpfr_set_q(lo.get(), value.get_mpq_t(), MPFR_RNDD);
    mpfr_set_q(hi.get(), value.get_mpq_t(), MPFR_RNDU);
    return Interval(std::move(lo), std::move(hi));
}

mpfr_prec_t Interval::precision() const noexcept
{
    return std::max(lower_.precision(), upper_.precision());
}

Float Interval::width() const
{
    Float w(precision());
    mpfr_sub(w.get(), upper_.get(), lower_.get(), MPFR_RNDU);
    return w;
}

bool Interval::width_at_most(double tol) const
{
    return mpfr_cmp_d(width().get(), tol) <= 0;
}

bool Interval::is_point() const
{
    return mpfr_equal_p(lower_.get(), upper_.get()) != 0;
}

double Interval::midpoint() const
{
    Float m(precision() + 1);
    mpfr_add(m.get(), lower_.get(), upper_.get(), MPFR_RNDN);
    mpfr_div_2ui(m.get(), m.get(), 1, MPFR_RNDN);
    return m.to_double(MPFR_RNDN);
}

bool Interval::contains(const Interval& other) const
{
    return mpfr_lessequal_p(lower_.get(), other.lower_.get())
        && mpfr_lessequal_p(other.upper_.get(), upper_.get());
}

bool Interval::contains(const mpq_class& value) const
{
    return mpfr_cmp_q(lower_.get(), value.get_mpq_t()) <= 0
        && mpfr_cmp_q(upper_.get(), value.get_mpq_t()) >= 0;
}

bool Interval::overlaps(const Interval& other) const
{
    return mpfr_lessequal_p(lower_.get(), other.upper_.get())
        && mpfr_lessequal_p(other.lower_.get(), upper_.get());
}

bool Interval::certainly_less(const Interval& other) const
{
    return mpfr_less_p(upper_.get(), other.lower_.get()) != 0;
}

bool Interval::certainly_positive() const
{
    return mpfr_sgn(lower_.get()) > 0;
}

bool Interval::certainly_negative() const
{
    return mpfr_sgn(upper_.get()) < 0;
}

std::string Interval::to_string(int digits) const
{
    return "[" + lower_.to_decimal(digits, MPFR_RNDD) + ", " + upper_.to_decimal(digits, MPFR_RNDU) + "]";
}

Interval operator+(const Interval& a, const Interval& b)
{
    const auto prec = joint_precision(a, b);
    Float lo(prec), hi(prec);
    mpfr_add(lo.get(), a.lower().get(), b.lower().get(), MPFR_RNDD);
    mpfr_add(hi.get(), a.upper().get(), b.upper().get(), MPFR_RNDU);
    return Interval(std::move(lo), std::move(hi));
}

Interval operator-(const Interval& a, const Interval& b)
{
    const auto prec = joint_precision(a, b);
    Float lo(prec), hi(prec);
    mpfr_sub(lo.get(), a.lower().get(), b.upper().get(), MPFR_RNDD);
    mpfr_sub(hi.get(), a.upper().get(), b.lower().get(), MPFR_RNDU);
    return Interval(std::move(lo), std::move(hi));
}

Interval operator-(const Interval& a)
{
    Float lo(a.precision()), hi(a.precision());
    mpfr_neg(lo.get(), a.upper().get(), MPFR_RNDD);
    mpfr_neg(hi.get(), a.lower().get(), MPFR_RNDU);
    return Interval(std::move(lo), std::move(hi));
}

Interval operator*(const Interval& a, const Interval& b)
{
    return corners(a, b, joint_precision(a, b), mpfr_mul);
}

Interval operator*(const Interval& a, const mpz_class& k)
{
    Float lo(a.precision()), hi(a.precision());
    const Float& from_lo = sgn(k) >= 0 ? a.lower() : a.upper();
    const Float& from_hi = sgn(k) >= 0 ? a.upper() : a.lower();
    mpfr_mul_z(lo.get(), from_lo.get(), k.get_mpz_t(), MPFR_RNDD);
    mpfr_mul_z(hi.get(), from_hi.get(), k.get_mpz_t(), MPFR_RNDU);
    return Interval(std::move(lo), std::move(hi));
}

Interval operator/(const Interval& a, const Interval& b)
{
    if (!b.certainly_positive() && !b.certainly_negative()) {
        fail(Errc::DomainError, "division by an interval containing zero");
    }
    return corners(a, b, joint_precision(a, b), mpfr_div);
}

Interval reciprocal(const Interval& a)
{
    if (!a.certainly_positive() && !a.certainly_negative()) {
        fail(Errc::DomainError, "reciprocal of an interval containing zero");
    }
    Float lo(a.precision()), hi(a.precision());
    mpfr_ui_div(lo.get(), 1, a.upper().get(), MPFR_RNDD);
    mpfr_ui_div(hi.get(), 1, a.lower().get(), MPFR_RNDU);
    return Interval(std::move(lo), std::move(hi));
}

Interval abs(const Interval& a)
{
    if (mpfr_sgn(a.lower().get()) >= 0) {
        return a;
    }
    if (mpfr_sgn(a.upper().get()) <= 0) {
        return -a;
    }
    Float lo(a.precision()), hi(a.precision());
    mpfr_neg(hi.get(), a.lower().get(), MPFR_RNDU);
    if (mpfr_less_p(hi.get(), a.upper().get())) {
        mpfr_set(hi.get(), a.upper().get(), MPFR_RNDU);
    }
    return Interval(std::move(lo), std::move(hi));
}

Interval sqrt(const Interval& a)
{
    if (mpfr_sgn(a.upper().get()) < 0) {
        fail(Errc::DomainError, "square root of a negative interval");
    }
    Float lo(a.precision()), hi(a.precision());
    if (mpfr_sgn(a.lower().get()) > 0) {
        mpfr_sqrt(lo.get(), a.lower().get(), MPFR_RNDD);
    }
    mpfr_sqrt(hi.get(), a.upper().get(), MPFR_RNDU);
    return Interval(std::move(lo), std::move(hi));
}

Interval log(const Interval& a)
{
    if (!a.certainly_positive()) {
        fail(Errc::DomainError, "logarithm of a non-positive interval");
    }
    Float lo(a.precision()), hi(a.precision());
    mpfr_log(lo.get(), a.lower().get(), MPFR_RNDD);
    mpfr_log(hi.get(), a.upper().get(), MPFR_RNDU);
    return Interval(std::move(lo), std::move(hi));
}

Interval pow(const Interval& base, const Interval& exponent)
{
    if (!base.certainly_positive()) {
        fail(Errc::DomainError, "power of a non-positive base");
    }
    // x^e = exp(e log x) and e log x is bilinear, so the extremes sit at corners.
    return corners(base, exponent, joint_precision(base, exponent), mpfr_pow);
}

Interval hull(const Interval& a, const Interval& b)
{
    const Float& lo = mpfr_lessequal_p(a.lower().get(), b.lower().get()) ? a.lower() : b.lower();
    const Float& hi = mpfr_greaterequal_p(a.upper().get(), b.upper().get()) ? a.upper() : b.upper();
    return Interval(lo, hi);
}

std::optional<Interval> intersect(const Interval& a, const Interval& b)
{
    if (!a.overlaps(b)) {
        return std::nullopt;
    }
    const Float& lo = mpfr_greaterequal_p(a.lower().get(), b.lower().get()) ? a.lower() : b.lower();
    const Float& hi = mpfr_lessequal_p(a.upper().get(), b.upper().get()) ? a.upper() : b.upper();
    return Interval(lo, hi);
}

} // namespace recip
