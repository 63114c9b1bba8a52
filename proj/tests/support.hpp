#pragma once

// Helpers shared by the test binaries. Reference values are computed here
// with plain MPFR at 256 bits, independently of the library's interval code.

#include <cstdint>
#include <random>
#include <string>

#include <gmpxx.h>
#include <mpfr.h>

#include "recip/alpha.hpp"
#include "recip/interval.hpp"

namespace testing {

class Hp {
public:
    static constexpr mpfr_prec_t bits = 256;

    Hp() { mpfr_init2(v_, bits); mpfr_set_ui(v_, 0, MPFR_RNDN); }
    Hp(double d) : Hp() { mpfr_set_d(v_, d, MPFR_RNDN); }
    Hp(const Hp& o) : Hp() { mpfr_set(v_, o.v_, MPFR_RNDN); }
    Hp& operator=(const Hp& o) { mpfr_set(v_, o.v_, MPFR_RNDN); return *this; }
    ~Hp() { mpfr_clear(v_); }

    static Hp of(const mpq_class& q) { Hp h; mpfr_set_q(h.v_, q.get_mpq_t(), MPFR_RNDN); return h; }
    static Hp of_long(long v) { Hp h; mpfr_set_si(h.v_, v, MPFR_RNDN); return h; }

    mpfr_ptr get() { return v_; }
    mpfr_srcptr get() const { return v_; }
    double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }

    friend Hp operator+(const Hp& a, const Hp& b) { Hp r; mpfr_add(r.v_, a.v_, b.v_, MPFR_RNDN); return r; }
    friend Hp operator-(const Hp& a, const Hp& b) { Hp r; mpfr_sub(r.v_, a.v_, b.v_, MPFR_RNDN); return r; }
    friend Hp operator*(const Hp& a, const Hp& b) { Hp r; mpfr_mul(r.v_, a.v_, b.v_, MPFR_RNDN); return r; }
    friend Hp operator/(const Hp& a, const Hp& b) { Hp r; mpfr_div(r.v_, a.v_, b.v_, MPFR_RNDN); return r; }

private:
    mpfr_t v_;
};

inline Hp hp_log(const Hp& x) { Hp r; mpfr_log(r.get(), x.get(), MPFR_RNDN); return r; }
inline Hp hp_sqrt(const Hp& x) { Hp r; mpfr_sqrt(r.get(), x.get(), MPFR_RNDN); return r; }
inline Hp hp_pow(const Hp& x, const Hp& e) { Hp r; mpfr_pow(r.get(), x.get(), e.get(), MPFR_RNDN); return r; }
inline Hp hp_frac(const Hp& x) { Hp f, r; mpfr_floor(f.get(), x.get()); mpfr_sub(r.get(), x.get(), f.get(), MPFR_RNDN); return r; }

// True when `value` is within 2^-200 (relative) of the closed interval.
inline bool encloses(const recip::Interval& iv, const Hp& value)
{
    Hp slack, lo, hi;
    mpfr_abs(slack.get(), value.get(), MPFR_RNDN);
    mpfr_mul_2si(slack.get(), slack.get(), -200, MPFR_RNDN);
    mpfr_add(slack.get(), slack.get(), Hp(0x1p-220).get(), MPFR_RNDN);
    mpfr_sub(lo.get(), value.get(), slack.get(), MPFR_RNDN);
    mpfr_add(hi.get(), value.get(), slack.get(), MPFR_RNDN);
    return mpfr_lessequal_p(iv.lower().get(), hi.get()) && mpfr_lessequal_p(lo.get(), iv.upper().get());
}

// alpha for the surd presets, directly.
inline Hp surd_value(long a, long b, long c, long d)
{
    return (Hp::of_long(a) + Hp::of_long(b) * hp_sqrt(Hp::of_long(d))) / Hp::of_long(c);
}

inline std::mt19937_64& rng()
{
    static std::mt19937_64 engine(20240521);
    return engine;
}

inline long uniform(long lo, long hi)
{
    return std::uniform_int_distribution<long>(lo, hi)(rng());
}

} // namespace testing
