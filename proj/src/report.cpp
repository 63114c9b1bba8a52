#include "recip/report.hpp"

namespace recip {

using nlohmann::json;

json integer_json(const mpz_class& v)
{
    if (v.fits_slong_p()) {
        return static_cast<std::int64_t>(v.get_si());
    }
    return v.get_str();
}

json rational_json(const mpq_class& v)
{
    if (v.get_den() == 1) {
        return integer_json(v.get_num());
    }
    return v.get_str();
}

json interval_json(const Interval& v)
{
    return {{"lo", v.lower_double()}, {"hi", v.upper_double()}};
}

json to_json(const ThreeGapDecomposition& dec)
{
    json delta = json::object();
    json counts = json::object();
    json steps = json::object();
    for (GapClass c : {GapClass::A, GapClass::B, GapClass::C}) {
        const std::string key(1, to_char(c));
        const LinearForm& form = dec.delta(c);
        delta[key] = {{"u", integer_json(form.u)},
                      {"v", integer_json(form.v)},
                      {"approx", dec.delta_enclosure(c).midpoint()}};
        counts[key] = dec.count(c);
    }
    steps["A"] = dec.step_A;
    steps["B"] = dec.step_B;
    steps["C"] = dec.step_C;
    return {{"N", dec.N},          {"k", dec.k},         {"r", dec.r},           {"s", dec.s},
            {"q_k", dec.q},        {"q_km1", dec.q_prev}, {"a_kp1", integer_json(dec.a_next)},
            {"delta", delta},      {"counts", counts},   {"steps", steps}};
}

json to_json(const SumReport& report)
{
    json out = {{"kind", std::string(to_string(report.kind))},
                {"alpha", report.alpha},
                {"gamma", report.gamma},
                {"N", report.N},
                {"a", rational_json(report.a)},
                {"b", rational_json(report.b)},
                {"excluded", report.excluded},
                {"exact_hit", report.exact_hit},
                {"exclusion", report.exclusion},
                {"value", interval_json(report.value)},
                {"terms", report.term_count},
                {"tol", report.tol}};
    if (report.modulus > 0) {
        out["modulus"] = report.modulus;
    }
    return out;
}

json to_json(const BoundReport& report)
{
    return {{"kind", std::string(to_string(report.kind))},
            {"alpha", report.alpha},
            {"gamma", report.gamma},
            {"N", report.N},
            {"b", rational_json(report.b)},
            {"K", report.K},
            {"q_K", integer_json(report.q_K)},
            {"q_K1", integer_json(report.q_K1)},
            {"bound", interval_json(report.bound)},
            {"sum", interval_json(report.sum)},
            {"verdict", std::string(to_string(report.verdict))},
            {"tightness", report.tightness}};
}

} // namespace recip
