#include <algorithm>
#include <cctype>
#include <string>
#include <vector>

#include "recip/alpha.hpp"
#include "recip/detail/frac_kernel.hpp"
#include "recip/error.hpp"

namespace recip {

Shift::Shift(Kind kind, mpq_class offset, mpq_class coefficient, unsigned long radius_bits)
    : kind_(kind), offset_(std::move(offset)), coefficient_(std::move(coefficient)), radius_bits_(radius_bits)
{
    offset_.canonicalize();
    coefficient_.canonicalize();
}

Shift Shift::rational(mpq_class value)
{
    return Shift(Kind::Rational, std::move(value), 0, 0);
}

Shift Shift::linear_combination(mpq_class u, mpq_class v)
{
    return Shift(Kind::LinearCombination, std::move(u), std::move(v), 0);
}

Shift Shift::enclosure(mpq_class center, unsigned long radius_bits)
{
    return Shift(Kind::Enclosure, std::move(center), 0, radius_bits);
}

std::optional<mpz_class> Shift::integer_hit_index() const
{
    // n*alpha - (u + v*alpha) = (n - v)*alpha - u is an integer only when
    // n = v and u is an integer, alpha being irrational.
    if (kind_ == Kind::Enclosure) {
        return std::nullopt;
    }
    if (offset_.get_den() != 1 || coefficient_.get_den() != 1) {
        return std::nullopt;
    }
    return coefficient_.get_num();
}

Interval Shift::enclose(const IrrationalNumber& alpha, mpfr_prec_t prec) const
{
    switch (kind_) {
    case Kind::Rational:
        return Interval::of(offset_, prec);
    case Kind::LinearCombination: {
        if (coefficient_ == 0) {
            return Interval::of(offset_, prec);
        }
        const auto extra = static_cast<mpfr_prec_t>(mpz_sizeinbase(coefficient_.get_num_mpz_t(), 2));
        return Interval::of(offset_, prec + extra) + Interval::of(coefficient_, prec + extra) * alpha.enclose(prec + extra);
    }
    case Kind::Enclosure: {
        const mpfr_prec_t work = std::max<mpfr_prec_t>(prec, static_cast<mpfr_prec_t>(radius_bits_) + 64);
        Interval center = Interval::of(offset_, work);
        Float lo = center.lower(), hi = center.upper();
        Float radius(work);
        mpfr_set_ui_2exp(radius.get(), 1, -static_cast<mpfr_exp_t>(radius_bits_), MPFR_RNDN);
        mpfr_sub(lo.get(), lo.get(), radius.get(), MPFR_RNDD);
        mpfr_add(hi.get(), hi.get(), radius.get(), MPFR_RNDU);
        return Interval(std::move(lo), std::move(hi));
    }
    }
    fail(Errc::DomainError, "unknown shift kind");
}

Shift Shift::negated() const
{
    return Shift(kind_, -offset_, -coefficient_, radius_bits_);
}

Shift Shift::plus_integer(const mpz_class& m) const
{
    return Shift(kind_, offset_ + m, coefficient_, radius_bits_);
}

std::string Shift::label() const
{
    switch (kind_) {
    case Kind::Rational:
        return "rat:" + offset_.get_str();
    case Kind::LinearCombination:
        return "lincomb:" + offset_.get_str() + "," + coefficient_.get_str();
    case Kind::Enclosure:
        return "dec:" + offset_.get_str() + "@" + std::to_string(radius_bits_);
    }
    return "?";
}

FracPart frac_part(const IrrationalNumber& x, std::int64_t n, const Shift& gamma, double target_width)
{
    if (n < 0) {
        fail(Errc::OutOfRange, "frac_part requires n >= 0");
    }
    if (!(target_width > 0)) {
        fail(Errc::DomainError, "target width must be positive");
    }
    for (mpfr_prec_t bits = initial_precision;; bits *= 2) {
        detail::FracKernel kernel(x, gamma, bits, n);
        const auto status = kernel.eval(n);
        if (status == detail::FracKernel::Status::ExactZero) {
            return FracPart{true, std::nullopt};
        }
        if (status == detail::FracKernel::Status::Ok) {
            Interval value = kernel.value();
            if (value.width_at_most(target_width)) {
                return FracPart{false, std::move(value)};
            }
        }
        if (kernel.limit() != detail::FracKernel::Limit::Precision || bits * 2 > precision_cap()) {
            detail::raise_unresolved(kernel, "{" + std::to_string(n) + "*alpha - gamma} for alpha = " + x.label());
        }
    }
}

// ---------------------------------------------------------------------------
// Spec-string parsing.

namespace {

std::string trim(std::string_view s)
{
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
        s.remove_prefix(1);
    }
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
        s.remove_suffix(1);
    }
    return std::string(s);
}

std::vector<std::string> split(std::string_view s, char sep)
{
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;) {
        const auto pos = s.find(sep, start);
        out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
        if (pos == std::string_view::npos) {
            break;
        }
        start = pos + 1;
    }
    return out;
}

mpz_class parse_integer(std::string_view text)
{
    const std::string s = trim(text);
    std::size_t i = (!s.empty() && (s[0] == '-' || s[0] == '+')) ? 1 : 0;
    if (i == s.size() || !std::all_of(s.begin() + static_cast<long>(i), s.end(),
                                      [](unsigned char c) { return std::isdigit(c) != 0; })) {
        fail(Errc::ParseError, "not an integer: '" + s + "'");
    }
    return mpz_class(s[0] == '+' ? s.substr(1) : s, 10);
}

} // namespace

mpq_class parse_rational(std::string_view text)
{
    const std::string s = trim(text);
    if (s.empty()) {
        fail(Errc::ParseError, "empty number");
    }
    if (const auto slash = s.find('/'); slash != std::string::npos) {
        const mpz_class num = parse_integer(std::string_view(s).substr(0, slash));
        const mpz_class den = parse_integer(std::string_view(s).substr(slash + 1));
        if (den == 0) {
            fail(Errc::ParseError, "zero denominator in '" + s + "'");
        }
        mpq_class q(num, den);
        q.canonicalize();
        return q;
    }
    if (const auto dot = s.find('.'); dot != std::string::npos) {
        const std::string whole = s.substr(0, dot);
        const std::string frac = s.substr(dot + 1);
        if (frac.empty() || !std::all_of(frac.begin(), frac.end(), [](unsigned char c) { return std::isdigit(c) != 0; })) {
            fail(Errc::ParseError, "malformed decimal '" + s + "'");
        }
        const bool negative = !whole.empty() && whole[0] == '-';
        std::string digits = whole;
        if (!digits.empty() && (digits[0] == '-' || digits[0] == '+')) {
            digits.erase(0, 1);
        }
        if (digits.empty()) {
            digits = "0";
        }
        const mpz_class int_part = parse_integer(digits);
        mpz_class scale;
        mpz_ui_pow_ui(scale.get_mpz_t(), 10, frac.size());
        mpq_class q(int_part * scale + mpz_class(frac, 10), scale);
        q.canonicalize();
        return negative ? mpq_class(-q) : q;
    }
    return mpq_class(parse_integer(s));
}

IrrationalNumber parse_alpha(std::string_view spec)
{
    const std::string s = trim(spec);
    if (s == "phi") {
        return make_quadratic_surd(1, 1, 2, 5);
    }
    if (s == "sqrt2") {
        return make_quadratic_surd(0, 1, 1, 2);
    }
    if (s == "sqrt2m1") {
        return make_quadratic_surd(-1, 1, 1, 2);
    }
    if (s.rfind("surd:", 0) == 0) {
        const auto parts = split(std::string_view(s).substr(5), ',');
        if (parts.size() != 4) {
            fail(Errc::ParseError, "surd spec needs a,b,c,d: '" + s + "'");
        }
        return make_quadratic_surd(parse_integer(parts[0]), parse_integer(parts[1]), parse_integer(parts[2]),
                                   parse_integer(parts[3]));
    }
    if (s.rfind("cf:", 0) == 0) {
        const auto parts = split(std::string_view(s).substr(3), ',');
        std::vector<mpz_class> digits;
        for (std::size_t i = 1; i < parts.size(); ++i) {
            digits.push_back(parse_integer(parts[i]));
        }
        return IrrationalNumber::cf_prefix(parse_integer(parts[0]), std::move(digits));
    }
    fail(Errc::ParseError, "unrecognised alpha spec '" + s + "'");
}

Shift parse_shift(std::string_view spec)
{
    const std::string s = trim(spec);
    if (s.rfind("rat:", 0) == 0) {
        return Shift::rational(parse_rational(std::string_view(s).substr(4)));
    }
    if (s.rfind("lincomb:", 0) == 0) {
        const auto parts = split(std::string_view(s).substr(8), ',');
        if (parts.size() != 2) {
            fail(Errc::ParseError, "lincomb spec needs u,v: '" + s + "'");
        }
        return Shift::linear_combination(parse_rational(parts[0]), parse_rational(parts[1]));
    }
    if (s.rfind("dec:", 0) == 0) {
        const auto body = std::string_view(s).substr(4);
        const auto at = body.find('@');
        if (at == std::string_view::npos) {
            fail(Errc::ParseError, "dec spec needs '@bits': '" + s + "'");
        }
        const mpz_class bits = parse_integer(body.substr(at + 1));
        if (bits < 1 || bits > 1'000'000) {
            fail(Errc::ParseError, "dec radius bits out of range: '" + s + "'");
        }
        return Shift::enclosure(parse_rational(body.substr(0, at)), bits.get_ui());
    }
    fail(Errc::ParseError, "unrecognised gamma spec '" + s + "'");
}

} // namespace recip
