#include "recip/alpha.hpp"

#include <algorithm>
#include <limits>
#include <mutex>
#include <utility>

#include "recip/error.hpp"

namespace recip {

struct IrrationalNumber::Impl {
    enum class Source { Surd, Prefix, Generator };

    Source source = Source::Surd;
    QuadraticSurd surd;
    DigitGenerator generator;
    std::string label;

    std::mutex mutex;
    std::vector<mpz_class> digits;

    // State of the periodic expansion: the current complete quotient is
    // (p + sqrt(disc)) / q, with q dividing disc - p^2.
    mpz_class p, q, disc, root;

    // Caller holds the mutex.
    bool extend_locked()
    {
        switch (source) {
        case Source::Prefix:
            return false;
        case Source::Generator: {
            mpz_class next = generator(digits.size());
            if (next < 1) {
                fail(Errc::DomainError, "digit generator produced a non-positive partial quotient");
            }
            digits.push_back(std::move(next));
            return true;
        }
        case Source::Surd: {
            // floor((p + sqrt(disc)) / q) with sqrt(disc) irrational.
            mpz_class numerator = p + root;
            if (q < 0) {
                numerator += 1;
            }
            mpz_class digit;
            mpz_fdiv_q(digit.get_mpz_t(), numerator.get_mpz_t(), q.get_mpz_t());
            const mpz_class next_p = digit * q - p;
            const mpz_class next_q = (disc - next_p * next_p) / q;
            p = next_p;
            q = next_q;
            digits.push_back(std::move(digit));
            return true;
        }
        }
        return false;
    }

    std::optional<mpz_class> digit(std::size_t k)
    {
        std::lock_guard lock(mutex);
        while (digits.size() <= k) {
            if (!extend_locked()) {
                return std::nullopt;
            }
        }
        return digits[k];
    }

    std::vector<mpz_class> snapshot()
    {
        std::lock_guard lock(mutex);
        return digits;
    }
};

namespace {

mpz_class gcd3(const mpz_class& a, const mpz_class& b, const mpz_class& c)
{
    mpz_class g;
    mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
    return g;
}

std::size_t bit_length(const mpz_class& v)
{
    return sgn(v) == 0 ? 1 : mpz_sizeinbase(v.get_mpz_t(), 2);
}

// Interval spanned by the reals whose expansion starts with `digits`:
// between p_M/q_M and (p_M + p_{M-1}) / (q_M + q_{M-1}).
Interval prefix_interval(const std::vector<mpz_class>& digits, mpfr_prec_t prec)
{
    mpz_class p_prev = 1, q_prev = 0;
    mpz_class p = digits.front(), q = 1;
    for (std::size_t k = 1; k < digits.size(); ++k) {
        mpz_class p_next = digits[k] * p + p_prev;
        mpz_class q_next = digits[k] * q + q_prev;
        p_prev = std::move(p);
        q_prev = std::move(q);
        p = std::move(p_next);
        q = std::move(q_next);
    }
    mpq_class near(p, q);
    mpq_class far(p + p_prev, q + q_prev);
    near.canonicalize();
    far.canonicalize();
    if (near > far) {
        std::swap(near, far);
    }
    Interval lo = Interval::of(near, prec);
    Interval hi = Interval::of(far, prec);
    return Interval(lo.lower(), hi.upper());
}

std::string join_digits(const mpz_class& a0, const std::vector<mpz_class>& digits)
{
    std::string out = "cf:" + a0.get_str();
    for (const auto& d : digits) {
        out += "," + d.get_str();
    }
    return out;
}

} // namespace

IrrationalNumber make_quadratic_surd(
    const mpz_class& a, const mpz_class& b, const mpz_class& c, const mpz_class& d)
{
    if (c == 0) {
        fail(Errc::ZeroDenominator, "surd denominator c is zero");
    }
    if (d < 2) {
        fail(Errc::DomainError, "surd radicand must be at least 2");
    }
    if (mpz_perfect_square_p(d.get_mpz_t()) != 0) {
        fail(Errc::PerfectSquare, "radicand " + d.get_str() + " is a perfect square");
    }
    if (b == 0) {
        fail(Errc::RationalValue, "surd coefficient b is zero");
    }

    QuadraticSurd s{a, b, c, d};
    if (s.c < 0) {
        s.a = -s.a;
        s.b = -s.b;
        s.c = -s.c;
    }
    const mpz_class g = gcd3(s.a, s.b, s.c);
    s.a /= g;
    s.b /= g;
    s.c /= g;

    auto impl = std::make_shared<IrrationalNumber::Impl>();
    impl->source = IrrationalNumber::Impl::Source::Surd;
    impl->surd = s;
    impl->label = "surd:" + s.a.get_str() + "," + s.b.get_str() + "," + s.c.get_str() + "," + s.d.get_str();

    // (a + b sqrt d)/c = (p + sqrt(b^2 d)) / q with the sign of b folded in.
    impl->disc = s.b * s.b * s.d;
    impl->p = sgn(s.b) > 0 ? s.a : mpz_class(-s.a);
    impl->q = sgn(s.b) > 0 ? s.c : mpz_class(-s.c);
    const mpz_class residue = impl->disc - impl->p * impl->p;
    if (!mpz_divisible_p(residue.get_mpz_t(), impl->q.get_mpz_t())) {
        const mpz_class scale = abs(impl->q);
        impl->p *= scale;
        impl->disc *= impl->q * impl->q;
        impl->q *= scale;
    }
    mpz_sqrt(impl->root.get_mpz_t(), impl->disc.get_mpz_t());
    return IrrationalNumber(std::move(impl));
}

IrrationalNumber IrrationalNumber::cf_prefix(mpz_class a0, std::vector<mpz_class> digits)
{
    for (const auto& d : digits) {
        if (d < 1) {
            fail(Errc::DomainError, "partial quotients after a_0 must be positive");
        }
    }
    auto impl = std::make_shared<Impl>();
    impl->source = Impl::Source::Prefix;
    impl->label = join_digits(a0, digits);
    impl->digits.reserve(digits.size() + 1);
    impl->digits.push_back(std::move(a0));
    for (auto& d : digits) {
        impl->digits.push_back(std::move(d));
    }
    return IrrationalNumber(std::move(impl));
}

IrrationalNumber IrrationalNumber::cf_stream(mpz_class a0, DigitGenerator generator, std::string label)
{
    if (!generator) {
        fail(Errc::DomainError, "empty digit generator");
    }
    auto impl = std::make_shared<Impl>();
    impl->source = Impl::Source::Generator;
    impl->generator = std::move(generator);
    impl->label = std::move(label);
    impl->digits.push_back(std::move(a0));
    return IrrationalNumber(std::move(impl));
}

bool IrrationalNumber::is_surd() const noexcept
{
    return impl_->source == Impl::Source::Surd;
}

const QuadraticSurd& IrrationalNumber::surd() const
{
    if (!is_surd()) {
        fail(Errc::DomainError, label() + " is not a quadratic surd");
    }
    return impl_->surd;
}

bool IrrationalNumber::refinable() const noexcept
{
    return impl_->source != Impl::Source::Prefix;
}

std::optional<mpz_class> IrrationalNumber::partial_quotient(std::size_t k) const
{
    return impl_->digit(k);
}

const std::string& IrrationalNumber::label() const noexcept
{
    return impl_->label;
}

Interval IrrationalNumber::enclose(mpfr_prec_t prec) const
{
    switch (impl_->source) {
    case Impl::Source::Surd: {
        const QuadraticSurd& s = impl_->surd;
        mpz_class root;
        mpz_sqrt(root.get_mpz_t(), s.d.get_mpz_t());
        const mpz_class magnitude = abs(s.a) + abs(s.b) * (root + 1);
        const auto work = prec + static_cast<mpfr_prec_t>(bit_length(magnitude)) + 8;
        Interval value = sqrt(Interval::of(s.d, work)) * s.b + Interval::of(s.a, work);
        return value / Interval::of(s.c, work);
    }
    case Impl::Source::Prefix:
        return prefix_interval(impl_->snapshot(), prec + 8);
    case Impl::Source::Generator: {
        // |alpha - p_M/q_M| < 1/q_M^2, so stop once q_M exceeds 2^(prec/2 + 1).
        std::size_t k = 0;
        mpz_class q_prev = 0, q = 1;
        const mpz_class target = mpz_class(1) << static_cast<mp_bitcnt_t>(prec / 2 + 2);
        while (q < target) {
            ++k;
            const auto a = impl_->digit(k);
            mpz_class q_next = *a * q + q_prev;
            q_prev = std::move(q);
            q = std::move(q_next);
        }
        std::vector<mpz_class> digits;
        digits.reserve(k + 1);
        for (std::size_t i = 0; i <= k; ++i) {
            digits.push_back(*impl_->digit(i));
        }
        return prefix_interval(digits, prec + 8);
    }
    }
    fail(Errc::DomainError, "unknown irrational source");
}

IrrationalNumber IrrationalNumber::negated() const
{
    switch (impl_->source) {
    case Impl::Source::Surd: {
        const QuadraticSurd& s = impl_->surd;
        return make_quadratic_surd(-s.a, -s.b, s.c, s.d);
    }
    case Impl::Source::Prefix: {
        // -[a0; a1, a2, ...] = [-a0-1; 1, a1-1, a2, ...] or [-a0-1; a2+1, a3, ...] when a1 = 1.
        const auto digits = impl_->snapshot();
        mpz_class a0 = -digits[0] - 1;
        std::vector<mpz_class> rest;
        if (digits.size() >= 2) {
            if (digits[1] > 1) {
                rest.emplace_back(1);
                rest.push_back(digits[1] - 1);
                rest.insert(rest.end(), digits.begin() + 2, digits.end());
            } else if (digits.size() >= 3) {
                rest.push_back(digits[2] + 1);
                rest.insert(rest.end(), digits.begin() + 3, digits.end());
            }
        }
        return cf_prefix(std::move(a0), std::move(rest));
    }
    case Impl::Source::Generator: {
        const IrrationalNumber source = *this;
        const mpz_class a1 = *partial_quotient(1);
        DigitGenerator gen;
        if (a1 > 1) {
            gen = [source](std::size_t k) -> mpz_class {
                if (k == 1) {
                    return 1;
                }
                if (k == 2) {
                    return *source.partial_quotient(1) - 1;
                }
                return *source.partial_quotient(k - 1);
            };
        } else {
            gen = [source](std::size_t k) -> mpz_class {
                if (k == 1) {
                    return *source.partial_quotient(2) + 1;
                }
                return *source.partial_quotient(k + 1);
            };
        }
        return cf_stream(-*partial_quotient(0) - 1, std::move(gen), "-(" + label() + ")");
    }
    }
    fail(Errc::DomainError, "unknown irrational source");
}

Interval eval_enclosure(const IrrationalNumber& x, double target_width)
{
    if (!(target_width > 0)) {
        fail(Errc::DomainError, "target width must be positive");
    }
    for (mpfr_prec_t prec = initial_precision; prec <= precision_cap(); prec *= 2) {
        Interval value = x.enclose(prec);
        if (value.width_at_most(target_width)) {
            return value;
        }
        if (!x.refinable()) {
            fail(Errc::InsufficientDigits,
                 x.label() + " is known only to width " + value.width().to_decimal(6, MPFR_RNDU));
        }
    }
    fail(Errc::UnresolvedComparison, "precision cap reached while enclosing " + x.label());
}

} // namespace recip
