// Command-line front end. Data goes to stdout, diagnostics to stderr.
//
// Exit codes: 0 success, 1 internal error, 2 bad arguments, 3 not enough
// continued-fraction digits, 4 unresolved comparison, 5 bound not verified.

#include <atomic>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "recip/alpha.hpp"
#include "recip/bounds.hpp"
#include "recip/cf.hpp"
#include "recip/error.hpp"
#include "recip/oracle.hpp"
#include "recip/report.hpp"
#include "recip/sums.hpp"
#include "recip/three_gap.hpp"

using namespace recip;

namespace {

enum Exit { ok = 0, internal = 1, usage = 2, digits = 3, unresolved = 4, inconclusive = 5 };

int exit_code(Errc code)
{
    switch (code) {
    case Errc::InsufficientDigits: return digits;
    case Errc::UnresolvedComparison: return unresolved;
    default: return usage;
    }
}

void print_json(const nlohmann::json& j)
{
    std::cout << j.dump(2) << '\n';
}

std::string format_double(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

// Flags shared by sum and verify.
struct SumArgs {
    std::string alpha;
    std::string gamma = "rat:0";
    std::int64_t N = 0;
    std::string a = "0";
    std::string b = "1";
    bool dist = false;
    bool exclude_residue = false;
    double tol = default_tolerance;
};

void add_sum_flags(CLI::App* cmd, SumArgs& args, bool with_a)
{
    cmd->add_option("--alpha", args.alpha, "phi, sqrt2, sqrt2m1, surd:a,b,c,d or cf:a0,a1,...")->required();
    cmd->add_option("--gamma", args.gamma, "rat:p/q, lincomb:u,v or dec:X@bits")->capture_default_str();
    cmd->add_option("--N", args.N, "upper summation index")->required();
    cmd->add_option("--b", args.b, "exponent of the fractional part")->capture_default_str();
    if (with_a) {
        cmd->add_option("--a", args.a, "exponent of n")->capture_default_str();
    }
    cmd->add_flag("--dist", args.dist, "use the distance to the nearest integer");
    cmd->add_flag("--exclude-residue", args.exclude_residue, "skip the whole residue class of n' mod q_K");
    cmd->add_option("--tol", args.tol, "width of the result enclosure")->capture_default_str();
}

int run_expand(const std::string& alpha_spec, std::size_t count)
{
    const IrrationalNumber x = parse_alpha(alpha_spec);
    const auto rows = convergents(x, count);
    std::cout << "k a_k p_k q_k D_k\n";
    for (const Convergent& c : rows) {
        std::cout << c.k << ' ' << c.a.get_str() << ' ' << c.p.get_str() << ' ' << c.q.get_str() << ' '
                  << format_double(c.error_enclosure.midpoint()) << '\n';
    }
    return ok;
}

int run_sum(const SumArgs& args)
{
    const IrrationalNumber x = parse_alpha(args.alpha);
    const Shift gamma = parse_shift(args.gamma);
    const mpq_class a = parse_rational(args.a), b = parse_rational(args.b);
    if (args.dist && args.exclude_residue) {
        fail(Errc::ParameterMismatch, "--dist and --exclude-residue cannot be combined");
    }
    if ((args.dist || args.exclude_residue) && (a != 0 || b != 1)) {
        fail(Errc::ParameterMismatch, "--dist and --exclude-residue take no --a or --b");
    }
    SumReport report;
    if (args.dist) {
        report = sum_reciprocal_dist(x, gamma, args.N, args.tol);
    } else if (args.exclude_residue) {
        report = sum_reciprocal_frac_excluding_residue(x, gamma, args.N, args.tol);
    } else if (a != 0) {
        report = sum_general(x, gamma, args.N, a, b, args.tol);
    } else {
        report = sum_reciprocal_power(x, gamma, args.N, b, args.tol);
    }
    print_json(to_json(report));
    return ok;
}

BoundKind kind_for(const SumArgs& args, const mpq_class& b)
{
    if (args.dist && args.exclude_residue) {
        fail(Errc::ParameterMismatch, "--dist and --exclude-residue cannot be combined");
    }
    if ((args.dist || args.exclude_residue) && b != 1) {
        fail(Errc::ParameterMismatch, "--dist and --exclude-residue take no --b");
    }
    if (args.dist) {
        return BoundKind::Cor1;
    }
    if (args.exclude_residue) {
        return BoundKind::Thm1E2;
    }
    return b == 1 ? BoundKind::Thm1E1 : power_bound_kind(b);
}

int run_verify(const SumArgs& args)
{
    const IrrationalNumber x = parse_alpha(args.alpha);
    const Shift gamma = parse_shift(args.gamma);
    const mpq_class b = parse_rational(args.b);
    const BoundReport report = check_bound(x, gamma, args.N, kind_for(args, b), b, args.tol);
    print_json(to_json(report));
    if (report.verdict != Verdict::Holds) {
        std::cerr << "recip: bound not verified\n";
        return inconclusive;
    }
    return ok;
}

// ---- sweep ----

std::vector<std::int64_t> parse_schedule(const std::string& text)
{
    std::vector<std::int64_t> out;
    if (text.empty()) {
        return out;
    }
    auto to_int = [&](const std::string& s) -> std::int64_t {
        try {
            std::size_t used = 0;
            const long long v = std::stoll(s, &used);
            if (used != s.size()) {
                throw std::invalid_argument(s);
            }
            return v;
        } catch (const std::exception&) {
            fail(Errc::ParseError, "bad N schedule '" + text + "'");
        }
    };
    if (text.find(':') != std::string::npos) {
        std::vector<std::string> parts;
        std::stringstream in(text);
        for (std::string p; std::getline(in, p, ':');) {
            parts.push_back(p);
        }
        if (parts.size() != 3) {
            fail(Errc::ParseError, "geometric schedule is start:factor:count, got '" + text + "'");
        }
        std::int64_t n = to_int(parts[0]);
        const std::int64_t factor = to_int(parts[1]), count = to_int(parts[2]);
        if (factor < 1 || count < 0) {
            fail(Errc::ParseError, "bad geometric schedule '" + text + "'");
        }
        for (std::int64_t i = 0; i < count; ++i, n *= factor) {
            out.push_back(n);
        }
    } else {
        std::stringstream in(text);
        for (std::string p; std::getline(in, p, ',');) {
            out.push_back(to_int(p));
        }
    }
    for (std::int64_t n : out) {
        if (n < 1) {
            fail(Errc::ParseError, "N values must be at least 1");
        }
    }
    return out;
}

struct SweepJob {
    std::size_t alpha = 0;
    std::size_t gamma = 0;
    std::int64_t N = 0;
    BoundKind kind = BoundKind::Thm1E1;
    mpq_class b = 1;
};

struct SweepRow {
    std::optional<BoundReport> report;
    std::string error;
};

BoundKind parse_kind(const std::string& s, const mpq_class& b)
{
    if (s == "e1") {
        return BoundKind::Thm1E1;
    }
    if (s == "e2") {
        return BoundKind::Thm1E2;
    }
    if (s == "dist") {
        return BoundKind::Cor1;
    }
    if (s == "power") {
        return power_bound_kind(b);
    }
    fail(Errc::ParseError, "unknown kind '" + s + "' (e1, e2, dist, power)");
}

// RFC 4180 quoting for specs such as surd:-1,1,1,2.
std::string csv_field(const std::string& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos) {
        return s;
    }
    std::string out = "\"";
    for (char c : s) {
        out += c;
        if (c == '"') {
            out += '"';
        }
    }
    return out + '"';
}

std::string csv_row(const std::string& alpha, const std::string& gamma, const SweepJob& job, const SweepRow& row)
{
    std::ostringstream out;
    out << csv_field(alpha) << ',' << csv_field(gamma) << ',' << job.N << ',';
    if (!row.report) {
        out << ",,," << to_string(job.kind) << ',' << job.b.get_str() << ",,,,,,error";
        return out.str();
    }
    const BoundReport& r = *row.report;
    out << r.K << ',' << r.q_K.get_str() << ',' << r.q_K1.get_str() << ',' << to_string(r.kind) << ','
        << job.b.get_str() << ',' << r.sum.lower().to_decimal(17, MPFR_RNDD) << ','
        << r.sum.upper().to_decimal(17, MPFR_RNDU) << ',' << r.bound.lower().to_decimal(17, MPFR_RNDD) << ','
        << r.bound.upper().to_decimal(17, MPFR_RNDU) << ',' << format_double(r.tightness) << ','
        << to_string(r.verdict);
    return out.str();
}

nlohmann::ordered_json json_row(const std::string& alpha, const std::string& gamma, const SweepJob& job,
                                const SweepRow& row)
{
    nlohmann::ordered_json j;
    j["alpha"] = alpha;
    j["gamma"] = gamma;
    j["N"] = job.N;
    j["kind"] = std::string(to_string(job.kind));
    j["b"] = job.b.get_str();
    if (!row.report) {
        j["verdict"] = "error";
        j["error"] = row.error;
        return j;
    }
    const BoundReport& r = *row.report;
    j["K"] = r.K;
    j["qK"] = r.q_K.get_str();
    j["qK1"] = r.q_K1.get_str();
    j["sum_lo"] = r.sum.lower().to_decimal(17, MPFR_RNDD);
    j["sum_hi"] = r.sum.upper().to_decimal(17, MPFR_RNDU);
    j["bound_lo"] = r.bound.lower().to_decimal(17, MPFR_RNDD);
    j["bound_hi"] = r.bound.upper().to_decimal(17, MPFR_RNDU);
    j["tightness"] = format_double(r.tightness);
    j["verdict"] = std::string(to_string(r.verdict));
    return j;
}

struct SweepArgs {
    std::vector<std::string> alphas;
    std::vector<std::string> gammas;
    std::string schedule;
    std::vector<std::string> kinds;
    std::vector<std::string> bs;
    double tol = default_tolerance;
    unsigned threads = 1;
    std::string format = "csv";
    std::string output;
};

int run_sweep(SweepArgs args)
{
    if (args.gammas.empty()) {
        args.gammas.push_back("rat:0");
    }
    if (args.kinds.empty()) {
        args.kinds.push_back(args.bs.empty() ? "e1" : "power");
    }
    if (!(args.tol > 0)) {
        fail(Errc::ParseError, "--tol must be positive");
    }
    std::vector<IrrationalNumber> alphas;
    for (const auto& s : args.alphas) {
        alphas.push_back(parse_alpha(s));
    }
    std::vector<Shift> gammas;
    for (const auto& s : args.gammas) {
        gammas.push_back(parse_shift(s));
    }
    const auto schedule = parse_schedule(args.schedule);
    std::vector<mpq_class> bs;
    for (const auto& s : args.bs) {
        bs.push_back(parse_rational(s));
    }
    if (bs.empty()) {
        bs.push_back(2);
    }

    // Row order is the nesting alpha, gamma, N, kind, b of the argument lists.
    std::vector<SweepJob> jobs;
    for (std::size_t ai = 0; ai < alphas.size(); ++ai) {
        for (std::size_t gi = 0; gi < gammas.size(); ++gi) {
            for (std::int64_t N : schedule) {
                for (const auto& k : args.kinds) {
                    if (k == "power") {
                        for (const auto& b : bs) {
                            jobs.push_back({ai, gi, N, parse_kind(k, b), b});
                        }
                    } else {
                        jobs.push_back({ai, gi, N, parse_kind(k, 1), 1});
                    }
                }
            }
        }
    }

    std::vector<SweepRow> rows(jobs.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < jobs.size(); i = next++) {
            const SweepJob& job = jobs[i];
            try {
                rows[i].report =
                    check_bound(alphas[job.alpha], gammas[job.gamma], job.N, job.kind, job.b, args.tol);
            } catch (const std::exception& e) {
                rows[i].error = e.what();
            }
        }
    };
    const unsigned threads = std::max(1U, args.threads);
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < threads; ++t) {
        pool.emplace_back(worker);
    }
    worker();
    for (auto& t : pool) {
        t.join();
    }

    std::ofstream file;
    if (!args.output.empty()) {
        file.open(args.output, std::ios::binary);
        if (!file) {
            fail(Errc::ParseError, "cannot open " + args.output);
        }
    }
    std::ostream& out = args.output.empty() ? std::cout : file;
    if (args.format == "json") {
        nlohmann::ordered_json all = nlohmann::ordered_json::array();
        for (std::size_t i = 0; i < jobs.size(); ++i) {
            all.push_back(json_row(args.alphas[jobs[i].alpha], args.gammas[jobs[i].gamma], jobs[i], rows[i]));
        }
        out << all.dump(2) << '\n';
    } else {
        out << "alpha,gamma,N,K,qK,qK1,kind,b,sum_lo,sum_hi,bound_lo,bound_hi,tightness,verdict\n";
        for (std::size_t i = 0; i < jobs.size(); ++i) {
            out << csv_row(args.alphas[jobs[i].alpha], args.gammas[jobs[i].gamma], jobs[i], rows[i]) << '\n';
        }
    }
    for (std::size_t i = 0; i < jobs.size(); ++i) {
        if (!rows[i].report) {
            std::cerr << "recip: row " << i + 1 << ": " << rows[i].error << '\n';
        }
    }
    return ok;
}

// ---- oracle ----

int run_oracle(const std::string& what, const SumArgs& args, unsigned long bits)
{
    const IrrationalNumber x = parse_alpha(args.alpha);
    oracle::OracleConfig cfg;
    cfg.precision_bits = bits;
    if (what == "points") {
        for (const auto& p : oracle::sorted_points(x, args.N, cfg)) {
            std::cout << p.n << ' ' << format_double(p.value.midpoint()) << '\n';
        }
        return ok;
    }
    if (what == "gaps") {
        for (const auto& g : oracle::distinct_values(oracle::gap_multiset(x, args.N, cfg))) {
            std::cout << format_double(g.value.midpoint()) << " x" << g.multiplicity << '\n';
        }
        return ok;
    }
    const Shift gamma = parse_shift(args.gamma);
    oracle::BruteOptions opts;
    opts.nearest = args.dist;
    opts.use_own_modulus = args.exclude_residue;
    const mpq_class a = parse_rational(args.a);
    if (a != 0) {
        opts.first = 1;
    }
    opts.tol = args.tol;
    const auto result = oracle::sum_brute(x, gamma, args.N, a, parse_rational(args.b), cfg, opts);
    nlohmann::json j = {{"value", interval_json(result.value)},
                        {"excluded", result.excluded},
                        {"exact_hit", result.exact_hit}};
    if (result.modulus > 0) {
        j["modulus"] = result.modulus;
    }
    print_json(j);
    return ok;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Reciprocal sums of fractional parts, three-gap structure and explicit bounds"};
    app.require_subcommand(1);

    std::string alpha_spec;
    std::size_t count = 5;
    auto* expand = app.add_subcommand("expand", "continued fraction digits and convergents");
    expand->add_option("--alpha", alpha_spec)->required();
    expand->add_option("--count", count, "number of convergents")->capture_default_str();

    std::int64_t N = 0;
    auto* gaps = app.add_subcommand("gaps", "three-gap decomposition as JSON");
    gaps->add_option("--alpha", alpha_spec)->required();
    gaps->add_option("--N", N)->required();
    auto* perm = app.add_subcommand("perm", "indices of {n alpha} in increasing order");
    perm->add_option("--alpha", alpha_spec)->required();
    perm->add_option("--N", N)->required();

    SumArgs sum_args;
    auto* sum = app.add_subcommand("sum", "certified reciprocal sum as JSON");
    add_sum_flags(sum, sum_args, true);

    SumArgs verify_args;
    auto* verify = app.add_subcommand("verify", "check a sum against its explicit bound");
    add_sum_flags(verify, verify_args, false);

    SweepArgs sweep_args;
    auto* sweep = app.add_subcommand("sweep", "batch of verify runs as CSV or JSON");
    sweep->add_option("--alpha", sweep_args.alphas, "repeatable")->required();
    sweep->add_option("--gamma", sweep_args.gammas, "repeatable; default rat:0");
    sweep->add_option("--N", sweep_args.schedule, "n1,n2,... or start:factor:count; empty for none");
    sweep->add_option("--kind", sweep_args.kinds, "e1, e2, dist or power; repeatable");
    sweep->add_option("--b", sweep_args.bs, "exponents for kind power; repeatable");
    sweep->add_option("--tol", sweep_args.tol)->capture_default_str();
    sweep->add_option("--threads", sweep_args.threads)->capture_default_str();
    sweep->add_option("--format", sweep_args.format)->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
    sweep->add_option("--output", sweep_args.output, "file instead of stdout");

    SumArgs oracle_args;
    oracle_args.tol = 0x1p-40;
    std::string oracle_what;
    unsigned long oracle_bits = 256;
    auto* oracle_cmd = app.add_subcommand("oracle", "slow reference computations (points, gaps, sum)");
    oracle_cmd->add_option("what", oracle_what)->required()->check(CLI::IsMember({"points", "gaps", "sum"}));
    add_sum_flags(oracle_cmd, oracle_args, true);
    oracle_cmd->add_option("--bits", oracle_bits)->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? ok : usage;
    }

    try {
        if (*expand) {
            return run_expand(alpha_spec, count);
        }
        if (*gaps) {
            print_json(to_json(decompose(parse_alpha(alpha_spec), N)));
            return ok;
        }
        if (*perm) {
            const auto order = permutation(parse_alpha(alpha_spec), N);
            for (std::size_t i = 0; i < order.size(); ++i) {
                std::cout << (i ? " " : "") << order[i];
            }
            std::cout << '\n';
            return ok;
        }
        if (*sum) {
            return run_sum(sum_args);
        }
        if (*verify) {
            return run_verify(verify_args);
        }
        if (*sweep) {
            return run_sweep(sweep_args);
        }
        if (*oracle_cmd) {
            return run_oracle(oracle_what, oracle_args, oracle_bits);
        }
    } catch (const Error& e) {
        std::cerr << "recip: " << e.what() << '\n';
        return exit_code(e.code());
    } catch (const std::exception& e) {
        std::cerr << "recip: internal error: " << e.what() << '\n';
        return internal;
    }
    return internal;
}
