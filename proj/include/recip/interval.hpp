#pragma once

#include <optional>
#include <string>

#include <gmpxx.h>
#include <mpfr.h>

namespace recip {

// Upper limit for every adaptive precision loop, in bits. The environment
// variable RECIP_PRECISION_CAP overrides the default of 2^16.
mpfr_prec_t precision_cap();

inline constexpr mpfr_prec_t initial_precision = 64;

// Owning wrapper around an mpfr_t. Values are dyadic rationals.
class Float {
public:
    explicit Float(mpfr_prec_t prec = initial_precision);
    Float(const Float& other);
    Float(Float&& other) noexcept;
    Float& operator=(const Float& other);
    Float& operator=(Float&& other) noexcept;
    ~Float();

    static Float exact(long value, mpfr_prec_t prec = initial_precision);

    mpfr_ptr get() noexcept { return value_; }
    mpfr_srcptr get() const noexcept { return value_; }
    mpfr_prec_t precision() const noexcept { return mpfr_get_prec(value_); }

    double to_double(mpfr_rnd_t rnd) const;
    std::string to_decimal(int digits, mpfr_rnd_t rnd) const;

private:
    mpfr_t value_;
};

int compare(const Float& a, const Float& b);

// Closed interval [lower, upper] with dyadic endpoints. Every operation
// rounds the lower endpoint down and the upper endpoint up, so an interval
// computed from enclosures of the inputs encloses the exact result.
class Interval {
public:
    Interval(Float lower, Float upper);

    static Interval point(long value, mpfr_prec_t prec = initial_precision);
    static Interval of(const mpz_class& value, mpfr_prec_t prec);
    static Interval of(const mpq_class& value, mpfr_prec_t prec);

    const Float& lower() const noexcept { return lower_; }
    const Float& upper() const noexcept { return upper_; }
    mpfr_prec_t precision() const noexcept;

    Float width() const;
    bool width_at_most(double tol) const;
    bool is_point() const;
    double midpoint() const;

    bool contains(const Interval& other) const;
    bool contains(const mpq_class& value) const;
    bool overlaps(const Interval& other) const;
    // Every point of *this is strictly below every point of other.
    bool certainly_less(const Interval& other) const;
    bool certainly_positive() const;
    bool certainly_negative() const;

    // Endpoints converted outward to double.
    double lower_double() const { return lower_.to_double(MPFR_RNDD); }
    double upper_double() const { return upper_.to_double(MPFR_RNDU); }

    std::string to_string(int digits = 17) const;

private:
    Float lower_;
    Float upper_;
};

Interval operator+(const Interval& a, const Interval& b);
Interval operator-(const Interval& a, const Interval& b);
Interval operator-(const Interval& a);
Interval operator*(const Interval& a, const Interval& b);
Interval operator*(const Interval& a, const mpz_class& k);
Interval operator/(const Interval& a, const Interval& b);

Interval reciprocal(const Interval& a);
Interval abs(const Interval& a);
Interval sqrt(const Interval& a);
Interval log(const Interval& a);
// base must be strictly positive; exponent is arbitrary.
Interval pow(const Interval& base, const Interval& exponent);
Interval hull(const Interval& a, const Interval& b);
std::optional<Interval> intersect(const Interval& a, const Interval& b);

} // namespace recip
