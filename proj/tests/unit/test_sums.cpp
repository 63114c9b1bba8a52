#include <doctest.h>

#include "recip/error.hpp"
#include "recip/oracle.hpp"
#include "recip/sums.hpp"
#include "support.hpp"

using namespace recip;
using testing::Hp;

namespace {

const IrrationalNumber& sqrt2m1()
{
    static const IrrationalNumber x = parse_alpha("sqrt2m1");
    return x;
}

Hp alpha_hp() { return testing::surd_value(-1, 1, 1, 2); }

// 1/{n alpha - g}^b summed over the listed n, at 256 bits.
Hp direct(const std::vector<long>& ns, double g, const mpq_class& b = 1, const mpq_class& a = 0)
{
    Hp total;
    for (long n : ns) {
        const Hp f = testing::hp_frac(Hp::of_long(n) * alpha_hp() - Hp(g));
        total = total + Hp(1) / (testing::hp_pow(f, Hp::of(b)) * testing::hp_pow(Hp::of_long(n), Hp::of(a)));
    }
    return total;
}

Hp direct_dist(const std::vector<long>& ns, double g)
{
    Hp total;
    for (long n : ns) {
        const Hp f = testing::hp_frac(Hp::of_long(n) * alpha_hp() - Hp(g));
        const Hp d = f.to_double() < 0.5 ? f : Hp(1) - f;
        total = total + Hp(1) / d;
    }
    return total;
}

} // namespace

TEST_SUITE("sums") {

TEST_CASE("minimisers")
{
    const auto half = Shift::rational(mpq_class(1, 2));
    const Argmin m = argmin_frac(sqrt2m1(), half, 4);
    CHECK(m.index == 4);
    CHECK_FALSE(m.exact_hit);
    CHECK(m.value.midpoint() == doctest::Approx(0.156854).epsilon(1e-5));
    CHECK(argmin_frac(parse_alpha("phi"), Shift::rational(0), 37).index == 0);
    const Argmin hit = argmin_frac(sqrt2m1(), Shift::linear_combination(0, 3), 4);
    CHECK(hit.index == 3);
    CHECK(hit.exact_hit);

    CHECK(argmin_dist(sqrt2m1(), Shift::rational(0), 4).index == 0);
    const auto brute = oracle::sum_brute(sqrt2m1(), half, 4, 0, 1, {}, {true});
    CHECK(argmin_dist(sqrt2m1(), half, 4).index == brute.excluded);
    const Argmin dhit = argmin_dist(sqrt2m1(), Shift::linear_combination(0, 2), 4);
    CHECK(dhit.index == 2);
    CHECK(dhit.exact_hit);
}

TEST_CASE("distance ties go to the smallest index")
{
    // ||n alpha - gamma|| is the same for n = 1 and n = 3 when gamma = 2 alpha + 1/2.
    const auto gamma = Shift::linear_combination(mpq_class(1, 2), 2);
    const auto x = parse_alpha("surd:1,1,2,5");
    const Argmin m = argmin_dist(x, gamma, 3);
    // n = 2 gives exactly 1/2; n = 1 and n = 3 tie below n = 0.
    CHECK(m.index == 1);
}

TEST_CASE("frac sums")
{
    const auto zero = Shift::rational(0), half = Shift::rational(mpq_class(1, 2));
    const SumReport s0 = sum_reciprocal_frac(sqrt2m1(), zero, 4);
    CHECK(s0.excluded == 0);
    CHECK(s0.exact_hit);
    CHECK(s0.value.width_at_most(default_tolerance));
    CHECK(testing::encloses(s0.value, direct({1, 2, 3, 4}, 0)));
    CHECK(s0.value.midpoint() == doctest::Approx(9.2651).epsilon(1e-4));

    const SumReport s1 = sum_reciprocal_frac(sqrt2m1(), half, 4);
    CHECK(s1.excluded == 4);
    CHECK(testing::encloses(s1.value, direct({0, 1, 2, 3}, 0.5)));
    CHECK(s1.value.midpoint() == doctest::Approx(7.4852).epsilon(1e-4));

    const SumReport one = sum_reciprocal_frac(sqrt2m1(), zero, 1);
    CHECK(one.value.midpoint() == doctest::Approx(2.414214).epsilon(1e-6));
}

TEST_CASE("residue-excluded sums")
{
    const auto zero = Shift::rational(0), half = Shift::rational(mpq_class(1, 2));
    const SumReport e0 = sum_reciprocal_frac_excluding_residue(sqrt2m1(), zero, 4);
    CHECK(e0.modulus == 2);
    CHECK(testing::encloses(e0.value, direct({1, 3}, 0)));
    CHECK(e0.value.midpoint() == doctest::Approx(6.5355).epsilon(1e-4));
    const SumReport e1 = sum_reciprocal_frac_excluding_residue(sqrt2m1(), half, 4);
    CHECK(testing::encloses(e1.value, direct({1, 3}, 0.5)));
    CHECK(e1.value.midpoint() == doctest::Approx(2.4404).epsilon(1e-4));
    const SumReport empty = sum_reciprocal_frac_excluding_residue(sqrt2m1(), zero, 1);
    CHECK(empty.modulus == 1);
    CHECK(empty.value.is_point());
    CHECK(empty.term_count == 0);
}

TEST_CASE("distance, power and weighted sums")
{
    const auto zero = Shift::rational(0), half = Shift::rational(mpq_class(1, 2));
    const SumReport d = sum_reciprocal_dist(sqrt2m1(), zero, 4);
    CHECK(testing::encloses(d.value, direct_dist({1, 2, 3, 4}, 0)));
    CHECK(d.value.midpoint() == doctest::Approx(15.2782).epsilon(1e-4));
    const SumReport d2 = sum_reciprocal_dist(sqrt2m1(), half, 2);
    std::vector<long> rest;
    for (long n = 0; n <= 2; ++n) {
        if (n != d2.excluded) {
            rest.push_back(n);
        }
    }
    CHECK(testing::encloses(d2.value, direct_dist(rest, 0.5)));

    const SumReport p2 = sum_reciprocal_power(sqrt2m1(), zero, 4, 2);
    CHECK(p2.kind == SumKind::Power);
    CHECK(testing::encloses(p2.value, direct({1, 2, 3, 4}, 0, 2)));
    CHECK(p2.value.midpoint() == doctest::Approx(26.589).epsilon(1e-4));
    const SumReport ph = sum_reciprocal_power(sqrt2m1(), zero, 4, mpq_class(1, 2));
    CHECK(testing::encloses(ph.value, direct({1, 2, 3, 4}, 0, mpq_class(1, 2))));
    CHECK(ph.value.midpoint() == doctest::Approx(5.91642).epsilon(1e-5));
    const SumReport p3 = sum_reciprocal_power(sqrt2m1(), zero, 4, mpq_class(3, 7));
    CHECK(testing::encloses(p3.value, direct({1, 2, 3, 4}, 0, mpq_class(3, 7))));
    CHECK(sum_reciprocal_power(sqrt2m1(), zero, 4, 1).kind == SumKind::Frac);

    const SumReport g1 = sum_general(sqrt2m1(), zero, 4, 1, 1);
    CHECK(testing::encloses(g1.value, direct({1, 2, 3, 4}, 0, 1, 1)));
    CHECK(g1.value.midpoint() == doctest::Approx(4.77214).epsilon(1e-5));
    const SumReport g2 = sum_general(sqrt2m1(), zero, 2, 2, 1);
    CHECK(g2.value.midpoint() == doctest::Approx(2.7160).epsilon(1e-4));
    const SumReport g0 = sum_general(sqrt2m1(), zero, 4, 0, 2);
    CHECK(g0.value.overlaps(p2.value));

    CHECK_THROWS_AS(sum_reciprocal_power(sqrt2m1(), zero, 4, 0), Error);
    CHECK_THROWS_AS(sum_general(sqrt2m1(), zero, 4, -1, 1), Error);
    CHECK_THROWS_AS(sum_reciprocal_frac(sqrt2m1(), zero, 0), Error);
}

TEST_CASE("refinement nests and subsets are smaller")
{
    const auto gamma = Shift::rational(mpq_class(2, 9));
    const auto x = parse_alpha("surd:1,1,2,5");
    Interval prev = sum_reciprocal_frac(x, gamma, 300, 0x1p-10).value;
    for (double tol : {0x1p-20, 0x1p-40, 0x1p-80}) {
        const Interval next = sum_reciprocal_frac(x, gamma, 300, tol).value;
        CHECK(next.width_at_most(tol));
        CHECK(prev.contains(next));
        prev = next;
    }
    const Interval sub = sum_reciprocal_frac_excluding_residue(x, gamma, 300).value;
    CHECK_FALSE(prev.certainly_less(sub));
    const Interval wide = sum_reciprocal_frac_excluding_residue(x, gamma, 600).value;
    CHECK(wide.certainly_less(sum_reciprocal_frac(x, gamma, 600).value));
}

TEST_CASE("agreement with the brute-force oracle on random inputs")
{
    const IrrationalNumber e = IrrationalNumber::cf_stream(
        2, [](std::size_t k) { return k % 3 == 2 ? mpz_class(2 * static_cast<long>(k + 1) / 3) : mpz_class(1); },
        "e");
    const IrrationalNumber xs[] = {parse_alpha("sqrt2m1"), parse_alpha("phi"), parse_alpha("surd:-1,1,1,3"),
                                   parse_alpha("surd:3,-2,7,11"), e};
    for (int trial = 0; trial < 60; ++trial) {
        const IrrationalNumber& x = xs[trial % 5];
        const std::int64_t N = testing::uniform(1, 200);
        const mpq_class g(testing::uniform(-300, 300), testing::uniform(1, 97));
        const Shift gamma = Shift::rational(g);
        CAPTURE(x.label());
        CAPTURE(N);
        CAPTURE(g.get_str());
        const SumReport s = sum_reciprocal_frac(x, gamma, N);
        const auto o = oracle::sum_brute(x, gamma, N, 0, 1);
        CHECK(s.excluded == o.excluded);
        CHECK(s.value.overlaps(o.value));

        const SumReport d = sum_reciprocal_dist(x, gamma, N);
        const auto od = oracle::sum_brute(x, gamma, N, 0, 1, {}, {true});
        CHECK(d.excluded == od.excluded);
        CHECK(d.value.overlaps(od.value));

        const mpq_class b(testing::uniform(1, 7), testing::uniform(1, 3));
        const mpq_class a(testing::uniform(0, 2), 2);
        const SumReport w = sum_general(x, gamma, N, a, b);
        oracle::BruteOptions opts;
        opts.first = 1;
        const auto ow = oracle::sum_brute(x, gamma, N, a, b, {}, opts);
        CHECK(w.value.overlaps(ow.value));

        const SumReport r = sum_reciprocal_frac_excluding_residue(x, gamma, N);
        oracle::BruteOptions ropts;
        ropts.use_own_modulus = true;
        const auto orr = oracle::sum_brute(x, gamma, N, 0, 1, {}, ropts);
        CHECK(r.modulus == orr.modulus);
        CHECK(r.value.overlaps(orr.value));
    }
}

TEST_CASE("finite digit prefixes")
{
    const auto pi = parse_alpha("cf:3,7,15,1,292,1,1,1,2,1,3");
    const auto gamma = Shift::rational(mpq_class(1, 3));
    const SumReport s = sum_reciprocal_frac(pi, gamma, 20, 1e-6);
    CHECK(s.value.overlaps(oracle::sum_brute(pi, gamma, 20, 0, 1, {}, {false, 0, false, 0, 1e-6}).value));
    // Past what the digits can resolve the failure is explicit.
    CHECK_THROWS_AS(sum_reciprocal_frac(parse_alpha("cf:3,7,15"), gamma, 500), Error);
}

TEST_CASE("linear-combination shifts and near hits")
{
    const auto x = parse_alpha("sqrt2m1");
    // gamma = 7 alpha - 2^-40: the n = 7 term is tiny but not zero.
    const auto near = Shift::linear_combination(mpq_class(-1, mpz_class(1) << 40), 7);
    const SumReport s = sum_reciprocal_frac(x, near, 50);
    CHECK_FALSE(s.exact_hit);
    CHECK(s.excluded == 7);
    const auto o = oracle::sum_brute(x, near, 50, 0, 1);
    CHECK(s.value.overlaps(o.value));
    // With +2^-40 the n = 7 term sits just below 1 instead and is summed.
    const auto above = Shift::linear_combination(mpq_class(1, mpz_class(1) << 40), 7);
    const SumReport t = sum_reciprocal_frac(x, above, 50);
    CHECK(t.excluded != 7);
    CHECK(t.value.overlaps(oracle::sum_brute(x, above, 50, 0, 1).value));
    // An enclosure-backed gamma too close to a point cannot be summed.
    CHECK_THROWS_AS(sum_reciprocal_frac(x, Shift::enclosure(0, 30), 10), Error);
}

TEST_CASE("semi-homogeneous reduction")
{
    const auto half = Shift::rational(mpq_class(1, 2));
    const auto r = reduce_to_semihomogeneous(sqrt2m1(), half, 4);
    CHECK(r.n_prime == 4);
    CHECK(r.gamma_prime.enclose(sqrt2m1(), 64).midpoint() == doctest::Approx(0.656854).epsilon(1e-5));
    const Interval t = sum_reciprocal_frac(sqrt2m1(), half, 4).value;
    const Interval t_prime = sum_reciprocal_frac(sqrt2m1(), r.gamma_prime, 4).value;
    CHECK(t_prime.midpoint() == doctest::Approx(11.770).epsilon(1e-4));
    CHECK(t.certainly_less(t_prime));

    const auto z = reduce_to_semihomogeneous(sqrt2m1(), Shift::rational(0), 4);
    CHECK(z.n_prime == 0);
    const auto top = reduce_to_semihomogeneous(sqrt2m1(), Shift::rational(mpq_class(9, 10)), 4);
    CHECK(top.n_prime == 0);
    CHECK(top.gamma_prime.offset() == 0);
    const auto shifted = reduce_to_semihomogeneous(sqrt2m1(), Shift::rational(mpq_class(7, 2)), 4);
    CHECK(shifted.n_prime == 4);
}

TEST_CASE("fractional parts of x and -x add up to one")
{
    const auto x = parse_alpha("surd:2,3,5,19");
    for (int trial = 0; trial < 50; ++trial) {
        const std::int64_t n = testing::uniform(0, 1000);
        const mpq_class g(testing::uniform(-1000, 1000), testing::uniform(1, 1000));
        const auto up = frac_part(x, n, Shift::rational(g), 0x1p-50);
        const auto down = frac_part(x.negated(), n, Shift::rational(-g), 0x1p-50);
        REQUIRE(up.value);
        REQUIRE(down.value);
        const Interval& f = *up.value;
        const Interval& h = *down.value;
        CHECK((f + h).contains(mpq_class(1)));
    }
}

}
