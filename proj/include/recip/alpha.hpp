#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

#include "recip/interval.hpp"

namespace recip {

// (a + b*sqrt(d)) / c with gcd(a, b, c) = 1, c > 0, b != 0, d not a square.
struct QuadraticSurd {
    mpz_class a;
    mpz_class b;
    mpz_class c;
    mpz_class d;
};

// An irrational real that can be queried exactly enough for rigorous
// comparisons: a quadratic surd, a finite prefix of continued-fraction
// digits, or a digit generator. Copies share the memoized digit table and
// are safe to use from several threads.
class IrrationalNumber {
public:
    // Returns a_k for k >= 1; must return a positive integer.
    using DigitGenerator = std::function<mpz_class(std::size_t)>;

    static IrrationalNumber cf_prefix(mpz_class a0, std::vector<mpz_class> digits);
    static IrrationalNumber cf_stream(mpz_class a0, DigitGenerator generator, std::string label);

    bool is_surd() const noexcept;
    const QuadraticSurd& surd() const;

    // Surds and generators can be enclosed to any width; a finite prefix
    // only pins the value to the set of reals sharing those digits.
    bool refinable() const noexcept;

    // a_k, or nullopt past the end of a finite prefix.
    std::optional<mpz_class> partial_quotient(std::size_t k) const;

    // Enclosure of width about 2^-prec (never below the prefix interval).
    Interval enclose(mpfr_prec_t prec) const;

    IrrationalNumber negated() const;

    const std::string& label() const noexcept;

    friend IrrationalNumber make_quadratic_surd(
        const mpz_class& a, const mpz_class& b, const mpz_class& c, const mpz_class& d);

private:
    struct Impl;
    explicit IrrationalNumber(std::shared_ptr<Impl> impl) : impl_(std::move(impl)) {}

    std::shared_ptr<Impl> impl_;
};

IrrationalNumber make_quadratic_surd(
    const mpz_class& a, const mpz_class& b, const mpz_class& c, const mpz_class& d);

// Enclosure of x with width <= target_width.
Interval eval_enclosure(const IrrationalNumber& x, double target_width);

// The shift gamma: an exact rational, an exact combination u + v*alpha with
// rational u, v, or a decimal known only to within 2^-radius_bits.
class Shift {
public:
    enum class Kind { Rational, LinearCombination, Enclosure };

    static Shift rational(mpq_class value);
    static Shift linear_combination(mpq_class u, mpq_class v);
    static Shift enclosure(mpq_class center, unsigned long radius_bits);

    Kind kind() const noexcept { return kind_; }
    bool exact() const noexcept { return kind_ != Kind::Enclosure; }
    // Rational value, u, or the enclosure center.
    const mpq_class& offset() const noexcept { return offset_; }
    // v for a linear combination, zero otherwise.
    const mpq_class& alpha_coefficient() const noexcept { return coefficient_; }
    unsigned long radius_bits() const noexcept { return radius_bits_; }

    // The unique n with n*alpha - gamma an integer, decided symbolically.
    // nullopt when no such n exists or gamma is enclosure-backed.
    std::optional<mpz_class> integer_hit_index() const;

    Interval enclose(const IrrationalNumber& alpha, mpfr_prec_t prec) const;

    Shift negated() const;
    Shift plus_integer(const mpz_class& m) const;

    std::string label() const;

private:
    Shift(Kind kind, mpq_class offset, mpq_class coefficient, unsigned long radius_bits);

    Kind kind_;
    mpq_class offset_;
    mpq_class coefficient_;
    unsigned long radius_bits_;
};

// {n*alpha - gamma}: either certified zero or an enclosure inside [0, 1).
struct FracPart {
    bool exact_zero = false;
    std::optional<Interval> value;
};

FracPart frac_part(const IrrationalNumber& x, std::int64_t n, const Shift& gamma, double target_width);

// "surd:a,b,c,d", "cf:a0,a1,...", "phi", "sqrt2", "sqrt2m1".
IrrationalNumber parse_alpha(std::string_view spec);
// "rat:p/q", "lincomb:u,v", "dec:0.5@64".
Shift parse_shift(std::string_view spec);
// "3", "-7/2", "0.125".
mpq_class parse_rational(std::string_view text);

} // namespace recip
