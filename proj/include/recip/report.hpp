#pragma once

#include <json.hpp>

#include "recip/bounds.hpp"
#include "recip/cf.hpp"
#include "recip/interval.hpp"
#include "recip/sums.hpp"
#include "recip/three_gap.hpp"

namespace recip {

// Integers that fit in 64 bits become JSON numbers, others decimal strings.
nlohmann::json integer_json(const mpz_class& v);
// "p/q" or "p".
nlohmann::json rational_json(const mpq_class& v);
// {lo, hi} as doubles rounded outward.
nlohmann::json interval_json(const Interval& v);

nlohmann::json to_json(const ThreeGapDecomposition& dec);
nlohmann::json to_json(const SumReport& report);
nlohmann::json to_json(const BoundReport& report);

} // namespace recip
