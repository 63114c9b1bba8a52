#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include <gmpxx.h>

#include "recip/alpha.hpp"
#include "recip/cf.hpp"
#include "recip/interval.hpp"

namespace recip {

enum class GapClass { A, B, C };

char to_char(GapClass c);

// The structure of the N + 1 intervals cut from [0, 1] by 0, {alpha}, ...,
// {N alpha}. With the convergent index k fixed by
//     q_k + q_{k-1} <= N < q_{k+1} + q_k
// and N = r q_k + q_{k-1} + s (1 <= r <= a_{k+1}, 0 <= s < q_k), the gaps
// have lengths
//     delta_A = |D_k|                           (count N + 1 - q_k)
//     delta_B = |D_{k+1}| + (a_{k+1} - r)|D_k|  (count s + 1)
//     delta_C = delta_A + delta_B               (count q_k - s - 1)
// and the point following {n alpha} in sorted order is n + step(class of n).
struct ThreeGapDecomposition {
    std::int64_t N = 0;
    std::size_t k = 0;
    std::int64_t r = 0;
    std::int64_t s = 0;

    std::int64_t q_prev = 0; // q_{k-1}
    std::int64_t q = 0;      // q_k
    mpz_class a_next;        // a_{k+1}

    LinearForm delta_A;
    LinearForm delta_B;
    LinearForm delta_C;
    Interval delta_A_enclosure = Interval::point(0);
    Interval delta_B_enclosure = Interval::point(0);
    Interval delta_C_enclosure = Interval::point(0);

    std::int64_t count_A = 0;
    std::int64_t count_B = 0;
    std::int64_t count_C = 0;

    // Signed index increments for each class.
    std::int64_t step_A = 0;
    std::int64_t step_B = 0;
    std::int64_t step_C = 0;

    const LinearForm& delta(GapClass c) const;
    const Interval& delta_enclosure(GapClass c) const;
    std::int64_t count(GapClass c) const;
};

ThreeGapDecomposition decompose(const IrrationalNumber& x, std::int64_t N);

GapClass classify(std::int64_t n, const ThreeGapDecomposition& dec);

// Successor of n in the sorted order of {0 alpha}, ..., {N alpha}; the
// largest point wraps around to 0.
std::int64_t step(std::int64_t n, const ThreeGapDecomposition& dec);

// (n_1, ..., n_N) with 0 < {n_1 alpha} < ... < {n_N alpha} < 1.
std::vector<std::int64_t> permutation(const ThreeGapDecomposition& dec);
std::vector<std::int64_t> permutation(const IrrationalNumber& x, std::int64_t N);

// Length of the interval that starts at {n alpha}.
const LinearForm& gap_after(std::int64_t n, const ThreeGapDecomposition& dec);

} // namespace recip
