#include "ptl/cli.hpp"

#include <cmath>
#include <cstdlib>
#include <memory>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "ptl/analytic.hpp"
#include "ptl/arith.hpp"
#include "ptl/error.hpp"
#include "ptl/gpy.hpp"
#include "ptl/progressions.hpp"
#include "ptl/series.hpp"
#include "ptl/sieve.hpp"
#include "ptl/tuples.hpp"

namespace ptl::cli {

std::optional<std::string> system_env(const std::string& name) {
    if (const char* v = std::getenv(name.c_str())) return std::string(v);
    return std::nullopt;
}

namespace {

using json = nlohmann::ordered_json;
using u64 = std::uint64_t;

enum class Format { Text, Json, Csv };

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

struct Outcome {
    json record = json::object();
    std::optional<Table> table;
    std::optional<std::string> text;
    Format preferred = Format::Json;
};

using Action = std::function<Outcome(const Context&)>;

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Numbers are rounded to 12 significant digits before serialization so JSON and
// CSV agree and stay byte-stable.
json real(double v) {
    if (!std::isfinite(v)) return nullptr;
    return std::stod(format_real(v));
}

json shifts_json(const ShiftTuple& h) { return json(std::vector<u64>(h.shifts().begin(), h.shifts().end())); }

std::string join(const std::vector<u64>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
    return s;
}

Outcome scalar(json record, std::string text) {
    Outcome o;
    o.record = std::move(record);
    o.text = std::move(text) + "\n";
    o.preferred = Format::Text;
    return o;
}

Outcome scalar_real(json record, const char* key, double value) {
    record[key] = real(value);
    return scalar(std::move(record), format_real(value));
}

Outcome scalar_int(json record, const char* key, u64 value) {
    record[key] = value;
    return scalar(std::move(record), std::to_string(value));
}

Approximation parse_approx(const std::string& s) {
    return s == "product" ? Approximation::Product : Approximation::Sieve;
}

std::string render_csv(const Table& t) {
    std::string out;
    auto line = [&](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) out += (i ? "," : "") + cells[i];
        out += '\n';
    };
    line(t.header);
    for (const auto& r : t.rows) line(r);
    return out;
}

std::string scalar_cell(const json& v) {
    if (v.is_null()) return "";
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number_float()) return format_real(v.get<double>());
    return v.dump();
}

Table flatten(const json& record) {
    Table t;
    t.rows.emplace_back();
    for (const auto& [key, value] : record.items()) {
        if (value.is_structured()) continue;
        t.header.push_back(key);
        t.rows.back().push_back(scalar_cell(value));
    }
    return t;
}

json report_json(const DetectionReport& r, Approximation approx) {
    json j;
    j["N"] = r.params.N;
    if (r.interval)
        j["h"] = r.params.shifts.size();
    else
        j["shifts"] = shifts_json(r.params.shifts);
    j["k"] = r.k;
    j["ell"] = r.params.ell;
    j["R"] = real(r.params.R);
    j["r"] = r.params.r;
    j["approx"] = approx == Approximation::Product ? "product" : "sieve";
    j["sum_value"] = real(r.sum_value);
    j["positive"] = r.positive;
    j["normalized"] = r.normalized ? real(*r.normalized) : json(nullptr);
    json ws = json::array();
    for (const auto& w : r.witnesses) {
        json e;
        e["n"] = w.n;
        e["weight"] = real(w.weight);
        e["prime_shifts"] = w.prime_shifts;
        e["prime_power_shifts"] = w.prime_power_shifts;
        e["certificate"] = w.certificate;
        ws.push_back(std::move(e));
    }
    j["witnesses"] = std::move(ws);
    return j;
}

template <class T>
std::shared_ptr<T> option(CLI::App* app, const std::string& name, const std::string& desc,
                          bool required, T initial = T{}) {
    auto value = std::make_shared<T>(initial);
    auto* opt = app->add_option(name, *value, desc);
    if (required)
        opt->required();
    else
        opt->capture_default_str();
    return value;
}

std::shared_ptr<std::vector<u64>> shifts_option(CLI::App* app, bool required = true) {
    auto value = std::make_shared<std::vector<u64>>();
    auto* opt = app->add_option("--shifts", *value, "comma-separated shifts, e.g. 0,2,6")->delimiter(',');
    if (required) opt->required();
    return value;
}

std::shared_ptr<std::string> approx_option(CLI::App* app) {
    auto value = std::make_shared<std::string>("product");
    app->add_option("--approx", *value, "approximation: product or sieve")
        ->check(CLI::IsMember({"product", "sieve"}))
        ->capture_default_str();
    return value;
}

class Builder {
public:
    explicit Builder(Action& selected) : selected_(selected) {}

    CLI::App* group(CLI::App* parent, const std::string& name, const std::string& desc) {
        auto* g = parent->add_subcommand(name, desc);
        g->fallthrough();
        g->require_subcommand(1);
        return g;
    }

    CLI::App* leaf(CLI::App* parent, const std::string& name, const std::string& desc) {
        auto* s = parent->add_subcommand(name, desc);
        s->fallthrough();
        return s;
    }

    void bind(CLI::App* leaf, Action action) {
        leaf->callback([this, action = std::move(action)] { selected_ = action; });
    }

private:
    Action& selected_;
};

void register_sieve(Builder& b, CLI::App& app) {
    auto* s = b.leaf(&app, "sieve", "list the primes in [lo, hi]");
    auto lo = option<u64>(s, "--lo", "lower end (>= 2)", true);
    auto hi = option<u64>(s, "--hi", "upper end", true);
    b.bind(s, [=](const Context& ctx) {
        const auto primes = sieve_range(*lo, *hi, ctx).primes();
        Outcome o;
        o.record["lo"] = *lo;
        o.record["hi"] = *hi;
        o.record["count"] = primes.size();
        o.record["primes"] = primes;
        Table t{{"p"}, {}};
        for (auto p : primes) t.rows.push_back({std::to_string(p)});
        o.table = std::move(t);
        o.preferred = Format::Csv;
        return o;
    });
}

void register_count(Builder& b, CLI::App& app) {
    auto* g = b.group(&app, "count", "prime counting functions");

    auto* pi = b.leaf(g, "pi", "pi(x), the number of primes <= x");
    auto x1 = option<u64>(pi, "--x", "x", true);
    b.bind(pi, [=](const Context& ctx) { return scalar_int({{"x", *x1}}, "pi", prime_count(*x1, ctx)); });

    auto* pi2 = b.leaf(g, "pi2", "pi_2(x), twin pairs with smaller member <= x");
    auto x2 = option<u64>(pi2, "--x", "x", true);
    b.bind(pi2, [=](const Context& ctx) { return scalar_int({{"x", *x2}}, "pi2", twin_count(*x2, ctx)); });

    auto* tuple = b.leaf(g, "tuple", "pi(x; H), n <= x with every n + h prime");
    auto x3 = option<u64>(tuple, "--x", "x", true);
    auto h3 = shifts_option(tuple);
    b.bind(tuple, [=](const Context& ctx) {
        const ShiftTuple H(*h3);
        return scalar_int({{"x", *x3}, {"shifts", shifts_json(H)}}, "count", tuple_count(*x3, H, ctx));
    });

    auto* ap = b.leaf(g, "ap", "pi(x; q, a), primes <= x congruent to a mod q");
    auto x4 = option<u64>(ap, "--x", "x", true);
    auto q4 = option<u64>(ap, "--q", "modulus", true);
    auto a4 = option<u64>(ap, "--a", "residue", true);
    b.bind(ap, [=](const Context& ctx) {
        return scalar_int({{"x", *x4}, {"q", *q4}, {"a", *a4}}, "count", prime_count_ap(*x4, *q4, *a4, ctx));
    });

    auto* nth = b.leaf(g, "nth", "the n-th prime");
    auto n5 = option<u64>(nth, "--n", "index (p_1 = 2)", true);
    b.bind(nth, [=](const Context& ctx) { return scalar_int({{"n", *n5}}, "prime", nth_prime(*n5, ctx)); });
}

void register_gaps(Builder& b, CLI::App& app) {
    auto* s = b.leaf(&app, "gaps", "consecutive prime gaps in [lo, hi]");
    auto lo = option<u64>(s, "--lo", "lower end (>= 2)", true);
    auto hi = option<u64>(s, "--hi", "upper end", true);
    b.bind(s, [=](const Context& ctx) {
        const auto g = gap_statistics(*lo, *hi, ctx);
        Outcome o;
        o.record["lo"] = *lo;
        o.record["hi"] = *hi;
        o.record["records"] = g.records.size();
        o.record["mean_gap"] = real(g.mean_gap);
        o.record["min_normalized"] = real(g.min_normalized);
        const auto& m = g.records[g.min_index];
        o.record["min_at"] = {{"n", m.n}, {"p", m.p}, {"next", m.next}};
        Table t{{"n", "p", "next", "gap", "normalized_gap"}, {}};
        for (const auto& r : g.records)
            t.rows.push_back({std::to_string(r.n), std::to_string(r.p), std::to_string(r.next),
                              std::to_string(r.next - r.p), format_real(r.normalized_gap)});
        o.table = std::move(t);
        return o;
    });
}

void register_analytic(Builder& b, CLI::App& app) {
    auto* g = b.group(&app, "analytic", "smooth approximations and partial sums");

    auto quadrature = [](double x, unsigned k, const QuadratureResult& r) {
        json j{{"x", real(x)}, {"k", k}, {"value", real(r.value)},
               {"abs_error_estimate", real(r.abs_error_estimate)}, {"evaluations", r.evaluations}};
        return scalar(std::move(j), format_real(r.value));
    };

    auto* li_cmd = b.leaf(g, "li", "li(x), the integral of 1/log t from 2 to x");
    auto x1 = option<double>(li_cmd, "--x", "x (>= 2)", true);
    auto tol1 = option<double>(li_cmd, "--tol", "absolute tolerance (0 = default relative 1e-9)", false, 0.0);
    b.bind(li_cmd, [=](const Context& ctx) { return quadrature(*x1, 1, li(*x1, *tol1, ctx)); });

    auto* lik = b.leaf(g, "lik", "li_k(x), the integral of 1/(log t)^k from 2 to x");
    auto x2 = option<double>(lik, "--x", "x (>= 2)", true);
    auto k2 = option<unsigned>(lik, "--k", "power k", true);
    auto tol2 = option<double>(lik, "--tol", "absolute tolerance (0 = default relative 1e-9)", false, 0.0);
    b.bind(lik, [=](const Context& ctx) { return quadrature(*x2, *k2, li_k(*x2, *k2, *tol2, ctx)); });

    auto* series = b.leaf(g, "series", "first m terms of the asymptotic expansion of li");
    auto x3 = option<double>(series, "--x", "x (> 1)", true);
    auto m3 = option<unsigned>(series, "--m", "number of terms", true);
    b.bind(series, [=](const Context&) {
        return scalar_real({{"x", real(*x3)}, {"m", *m3}}, "value", li_asymptotic(*x3, *m3));
    });

    auto* mertens = b.leaf(g, "mertens", "prod_{p <= P} (1 - 1/p), real and exact");
    auto P4 = option<u64>(mertens, "--P", "P (>= 2)", true);
    b.bind(mertens, [=](const Context& ctx) {
        Outcome o;
        o.record["P"] = *P4;
        o.record["real"] = real(mertens_product(*P4, ctx));
        try {
            o.record["exact"] = mertens_product_exact(*P4).to_string();
        } catch (const OverflowError&) {
            o.record["exact"] = nullptr;  // denominator exceeds 128 bits
        }
        return o;
    });

    auto* mds = b.leaf(g, "mobius-divisor-sum", "sum_{d | P#} mu(d)/d as an exact fraction");
    auto P5 = option<u64>(mds, "--P", "P (primes <= P form the primorial)", true);
    b.bind(mds, [=](const Context&) {
        const auto v = mobius_divisor_sum(*P5);
        Outcome o;
        o.record["P"] = *P5;
        o.record["exact"] = v.to_string();
        o.record["real"] = real(v.to_double());
        return o;
    });

    auto* ms = b.leaf(g, "mobius-sum", "sum_{n <= N} mu(n)/n");
    auto N6 = option<u64>(ms, "--N", "N (<= 1e8)", true);
    b.bind(ms, [=](const Context& ctx) { return scalar_real({{"N", *N6}}, "value", mobius_partial_sum(*N6, ctx)); });

    auto* hs = b.leaf(g, "harmonic", "sum_{n <= N} 1/n");
    auto N7 = option<u64>(hs, "--N", "N (>= 1)", true);
    b.bind(hs, [=](const Context& ctx) {
        const double v = harmonic_sum(*N7, ctx);
        auto o = scalar_real({{"N", *N7}}, "value", v);
        o.record["minus_log"] = real(v - std::log(static_cast<double>(*N7)));
        return o;
    });

    auto* brun = b.leaf(g, "brun", "partial sum of reciprocals of twin primes up to x");
    auto x8 = option<u64>(brun, "--x", "x", true);
    auto variant = option<std::string>(brun, "--variant", "members (each twin prime once) or pairs", false,
                                       std::string("members"));
    brun->get_option("--variant")->check(CLI::IsMember({"members", "pairs"}));
    b.bind(brun, [=](const Context& ctx) {
        const auto v = *variant == "pairs" ? BrunVariant::Pairs : BrunVariant::Members;
        return scalar_real({{"x", *x8}, {"variant", *variant}}, "value", brun_partial_sum(*x8, v, ctx));
    });

    auto* ep = b.leaf(g, "euler-product", "truncated sum_{n<=N} n^-z against prod_{p<=P} (1-p^-z)^-1");
    auto z9 = option<double>(ep, "--z", "real exponent (>= 1.5)", true);
    auto P9 = option<u64>(ep, "--P", "prime cutoff", true);
    auto N9 = option<u64>(ep, "--N", "sum cutoff", true);
    b.bind(ep, [=](const Context& ctx) {
        const auto r = euler_product_check(*z9, *P9, *N9, ctx);
        Outcome o;
        o.record = {{"z", real(*z9)}, {"P", *P9}, {"N", *N9}, {"sum_side", real(r.sum_side)},
                    {"product_side", real(r.product_side)}, {"difference", real(r.product_side - r.sum_side)}};
        return o;
    });
}

void register_arith(Builder& b, CLI::App& app) {
    auto* g = b.group(&app, "arith", "arithmetic functions of a single integer");

    auto* factor = b.leaf(g, "factor", "prime factorization");
    auto n1 = option<u64>(factor, "--n", "n (>= 1)", true);
    b.bind(factor, [=](const Context&) {
        const auto f = factorize(*n1);
        json factors = json::array();
        std::string text;
        for (const auto& pp : f.factors) {
            factors.push_back({pp.prime, pp.exponent});
            if (!text.empty()) text += " * ";
            text += std::to_string(pp.prime) + (pp.exponent > 1 ? "^" + std::to_string(pp.exponent) : "");
        }
        return scalar({{"n", *n1}, {"factors", factors}}, text.empty() ? "1" : text);
    });

    auto* mu = b.leaf(g, "mobius", "Moebius function mu(n)");
    auto n2 = option<u64>(mu, "--n", "n (>= 1)", true);
    b.bind(mu, [=](const Context&) {
        const int v = mobius(*n2);
        return scalar({{"n", *n2}, {"mu", v}}, std::to_string(v));
    });

    auto* phi = b.leaf(g, "phi", "Euler phi(q)");
    auto q3 = option<u64>(phi, "--q", "q (>= 1)", true);
    b.bind(phi, [=](const Context&) { return scalar_int({{"q", *q3}}, "phi", euler_phi(*q3)); });

    auto* lam = b.leaf(g, "mangoldt", "von Mangoldt Lambda(n)");
    auto n4 = option<u64>(lam, "--n", "n (>= 1)", true);
    b.bind(lam, [=](const Context&) { return scalar_real({{"n", *n4}}, "value", von_mangoldt(*n4)); });

    auto* lamk = b.leaf(g, "mangoldt-k", "generalized von Mangoldt Lambda_k(n)");
    auto n5 = option<u64>(lamk, "--n", "n (1..1e12)", true);
    auto k5 = option<unsigned>(lamk, "--k", "k (>= 1)", true);
    b.bind(lamk, [=](const Context& ctx) {
        return scalar_real({{"n", *n5}, {"k", *k5}}, "value", generalized_von_mangoldt(*n5, *k5, ctx));
    });
}

void register_euclid(Builder& b, CLI::App& app) {
    auto* s = b.leaf(&app, "euclid", "N = p_1 ... p_n + 1 and its new prime factors");
    auto primes = std::make_shared<std::vector<u64>>();
    s->add_option("--primes", *primes, "comma-separated distinct primes")->delimiter(',')->required();
    b.bind(s, [=](const Context&) {
        const auto r = euclid_step(*primes);
        Outcome o;
        o.record = {{"primes", *primes}, {"N", r.N}, {"new_primes", r.new_primes}};
        return o;
    });
}

void register_tuples(Builder& b, CLI::App& app) {
    auto* g = b.group(&app, "tuples", "shift tuples and the singular series");

    auto* nu = b.leaf(g, "nu", "nu_p(H), residues of H mod p");
    auto h1 = shifts_option(nu);
    auto p1 = option<u64>(nu, "--p", "prime p", true);
    b.bind(nu, [=](const Context&) {
        const ShiftTuple H(*h1);
        return scalar_int({{"shifts", shifts_json(H)}, {"p", *p1}}, "nu", nu_p(H, *p1));
    });

    auto* adm = b.leaf(g, "admissible", "whether H misses a residue class mod every prime");
    auto h2 = shifts_option(adm);
    b.bind(adm, [=](const Context&) {
        const ShiftTuple H(*h2);
        const auto cover = covering_prime(H);
        json j{{"shifts", shifts_json(H)}, {"admissible", !cover.has_value()}};
        std::string text = cover ? "false" : "true";
        if (cover) {
            const std::string reason = "p=" + std::to_string(*cover) + " covers all residues";
            j["covering_prime"] = *cover;
            j["reason"] = reason;
            text += "\n" + reason;
        } else {
            j["covering_prime"] = nullptr;
            j["reason"] = nullptr;
        }
        return scalar(std::move(j), text);
    });

    auto* sing = b.leaf(g, "singular", "truncated singular series S(H)");
    auto h3 = shifts_option(sing);
    auto c3 = option<u64>(sing, "--cutoff", "largest prime in the product", false, 10'000'000);
    b.bind(sing, [=](const Context& ctx) {
        const ShiftTuple H(*h3);
        const auto s = singular_series(H, *c3, ctx);
        Outcome o;
        o.record = {{"shifts", shifts_json(H)}, {"cutoff", s.cutoff}, {"value", real(s.value)},
                    {"tail_bound", real(s.tail_bound)}, {"admissible", s.admissible}};
        return o;
    });

    auto* nar = b.leaf(g, "narrowest", "admissible k-tuple of least diameter");
    auto k4 = option<unsigned>(nar, "--k", "tuple size (<= 12)", true);
    auto d4 = option<u64>(nar, "--max-diameter", "search limit (<= 400)", false, kNarrowestMaxDiameter);
    b.bind(nar, [=](const Context&) {
        const auto t = narrowest_admissible(*k4, *d4);
        Outcome o;
        o.record["k"] = *k4;
        o.record["found"] = t.has_value();
        o.record["shifts"] = t ? shifts_json(*t) : json(nullptr);
        o.record["diameter"] = t ? json(t->diameter()) : json(nullptr);
        return o;
    });

    auto* pred = b.leaf(g, "predict", "Hardy-Littlewood prediction S(H) li_k(x)");
    auto x5 = option<double>(pred, "--x", "x (>= 2)", true);
    auto h5 = shifts_option(pred);
    auto c5 = option<u64>(pred, "--cutoff", "singular series cutoff", false, 10'000'000);
    auto observed = std::make_shared<bool>(false);
    pred->add_flag("--observed", *observed, "also count pi(x; H) with the sieve");
    b.bind(pred, [=](const Context& ctx) {
        const ShiftTuple H(*h5);
        const auto p = hl_prediction(*x5, H, *c5, ctx);
        Outcome o;
        o.record = {{"x", real(*x5)}, {"shifts", shifts_json(H)}, {"k", H.size()},
                    {"admissible", p.admissible}, {"singular_series", real(p.singular_series)},
                    {"li_k", real(p.li_k)}, {"prediction", real(p.value)}};
        if (*observed) {
            const u64 count = tuple_count(static_cast<u64>(*x5), H, ctx);
            o.record["observed"] = count;
            o.record["ratio"] = count ? real(p.value / static_cast<double>(count)) : json(nullptr);
        }
        return o;
    });
}

void register_constants(Builder& b, CLI::App& app) {
    auto* g = b.group(&app, "constants", "named constants");
    auto* twin = b.leaf(g, "twin", "twin prime constant 2 prod_{p>2} (1 - 1/(p-1)^2)");
    auto cutoff = option<u64>(twin, "--cutoff", "largest prime in the product", false, 10'000'000);
    b.bind(twin, [=](const Context& ctx) {
        return scalar_real({{"cutoff", *cutoff}}, "value", twin_prime_constant(*cutoff, ctx));
    });
}

void register_gpy(Builder& b, CLI::App& app) {
    auto* g = b.group(&app, "gpy", "truncated divisor sums and detection sums");

    auto* lam = b.leaf(g, "lambda", "Lambda_R(n)");
    auto n1 = option<u64>(lam, "--n", "n (>= 1)", true);
    auto R1 = option<double>(lam, "--R", "truncation R (>= 1)", true);
    b.bind(lam, [=](const Context&) { return scalar_real({{"n", *n1}, {"R", real(*R1)}}, "value", lambda_R(*n1, *R1)); });

    auto* lt = b.leaf(g, "lambda-tuple", "Lambda_R(n; H) = prod Lambda_R(n + h)");
    auto n2 = option<u64>(lt, "--n", "n (>= 1)", true);
    auto h2 = shifts_option(lt);
    auto R2 = option<double>(lt, "--R", "truncation R (>= 1)", true);
    b.bind(lt, [=](const Context&) {
        const ShiftTuple H(*h2);
        return scalar_real({{"n", *n2}, {"shifts", shifts_json(H)}, {"R", real(*R2)}}, "value",
                           lambda_R_product(*n2, H, *R2));
    });

    auto* ls = b.leaf(g, "lambda-sieve", "Lambda_R(n; H, l), the single divisor sum over P(n, H)");
    auto n3 = option<u64>(ls, "--n", "n (>= 1)", true);
    auto h3 = shifts_option(ls);
    auto e3 = option<unsigned>(ls, "--ell", "extra exponent l", false, 0u);
    auto R3 = option<double>(ls, "--R", "truncation R (>= 1)", true);
    b.bind(ls, [=](const Context& ctx) {
        const ShiftTuple H(*h3);
        return scalar_real({{"n", *n3}, {"shifts", shifts_json(H)}, {"ell", *e3}, {"R", real(*R3)}}, "value",
                           lambda_R_sieve(*n3, H, *e3, *R3, ctx));
    });

    auto* poly = b.leaf(g, "poly", "tuple polynomial (n + h_1) ... (n + h_k)");
    auto n4 = option<u64>(poly, "--n", "n", true);
    auto h4 = shifts_option(poly);
    b.bind(poly, [=](const Context&) {
        const ShiftTuple H(*h4);
        const std::string v = to_string(tuple_polynomial(*n4, H));
        return scalar({{"n", *n4}, {"shifts", shifts_json(H)}, {"value", v}}, v);
    });

    struct MomentArgs {
        std::shared_ptr<u64> N;
        std::shared_ptr<std::vector<u64>> shifts;
        std::shared_ptr<double> R;
        std::shared_ptr<unsigned> ell;
        std::shared_ptr<std::string> approx;

        GpyParams params() const {
            GpyParams p;
            p.N = *N;
            p.shifts = ShiftTuple(*shifts);
            p.ell = *ell;
            p.R = *R > 0 ? *R : default_truncation(*N, static_cast<unsigned>(p.shifts.size()));
            return p;
        }
    };
    auto moment_args = [](CLI::App* s) {
        return MomentArgs{option<u64>(s, "--N", "range length N", true), shifts_option(s),
                          option<double>(s, "--R", "truncation R (0 = floor(N^(1/4k)))", false, 0.0),
                          option<unsigned>(s, "--ell", "extra exponent l (sieve only)", false, 0u),
                          approx_option(s)};
    };
    auto moment_json = [](const GpyParams& p, const std::string& approx) {
        return json{{"N", p.N}, {"shifts", shifts_json(p.shifts)}, {"R", real(p.R)}, {"ell", p.ell},
                    {"approx", approx}};
    };

    auto* m1 = b.leaf(g, "moment1", "sum_{n <= N} w(n)^2");
    auto a1 = moment_args(m1);
    b.bind(m1, [=](const Context& ctx) {
        const auto p = a1.params();
        auto j = moment_json(p, *a1.approx);
        j["value"] = real(first_moment(p, parse_approx(*a1.approx), ctx));
        Outcome o;
        o.record = std::move(j);
        return o;
    });

    auto* m2 = b.leaf(g, "moment2", "sum_{n <= N} Lambda(n + h0) w(n)^2");
    auto a2 = moment_args(m2);
    auto h0 = option<u64>(m2, "--h0", "shift of the von Mangoldt weight", true);
    b.bind(m2, [=](const Context& ctx) {
        const auto p = a2.params();
        auto j = moment_json(p, *a2.approx);
        j["h0"] = *h0;
        j["value"] = real(second_moment(p, *h0, parse_approx(*a2.approx), ctx));
        Outcome o;
        o.record = std::move(j);
        return o;
    });

    auto* det = b.leaf(g, "detect", "detection sum over n in (N, 2N] for a fixed tuple");
    auto a3 = moment_args(det);
    auto r3 = option<unsigned>(det, "--r", "threshold r (>= 1)", false, 1u);
    b.bind(det, [=](const Context& ctx) {
        auto p = a3.params();
        p.r = *r3;
        const auto approx = parse_approx(*a3.approx);
        Outcome o;
        o.record = report_json(detection_sum(p, approx, ctx), approx);
        return o;
    });

    auto* di = b.leaf(g, "detect-interval", "detection sum over every k-subset of (n, n + h]");
    di->set_help_flag("--help", "Print this help message and exit");
    auto N5 = option<u64>(di, "--N", "range length N", true);
    auto hh = option<u64>(di, "--h", "interval length h", true);
    auto k5 = option<unsigned>(di, "--k", "tuple size k", true);
    auto e5 = option<unsigned>(di, "--ell", "extra exponent l", false, 0u);
    auto R5 = option<double>(di, "--R", "truncation R (0 = floor(N^(1/4k)))", false, 0.0);
    auto r5 = option<unsigned>(di, "--r", "threshold r (>= 1)", false, 1u);
    auto ap5 = std::make_shared<std::string>("sieve");
    di->add_option("--approx", *ap5, "approximation: product or sieve")
        ->check(CLI::IsMember({"product", "sieve"}))
        ->capture_default_str();
    b.bind(di, [=](const Context& ctx) {
        const double R = *R5 > 0 ? *R5 : default_truncation(*N5, *k5);
        const auto approx = parse_approx(*ap5);
        Outcome o;
        o.record = report_json(detection_sum_interval(*N5, *hh, *k5, *e5, R, *r5, approx, ctx), approx);
        return o;
    });
}

void register_bv(Builder& b, CLI::App& app) {
    auto* g = b.group(&app, "bv", "primes in arithmetic progressions");

    auto* exp = b.leaf(g, "expected", "li(x)/phi(q), the expected count per coprime residue");
    auto x0 = option<double>(exp, "--x", "x (>= 2)", true);
    auto q0 = option<u64>(exp, "--q", "modulus", true);
    b.bind(exp, [=](const Context& ctx) {
        return scalar_real({{"x", real(*x0)}, {"q", *q0}}, "value", ap_expected(*x0, *q0, ctx));
    });

    auto* sum = b.leaf(g, "sum", "sum_{q <= Q} max_{(a,q)=1} |pi(x;q,a) - li(x)/phi(q)|");
    auto x1 = option<u64>(sum, "--x", "x (<= 1e8)", true);
    auto Q1 = option<u64>(sum, "--Q", "largest modulus", true);
    b.bind(sum, [=](const Context& ctx) {
        const auto r = bv_sum(*x1, *Q1, ctx);
        Outcome o;
        o.record["x"] = *x1;
        o.record["Q"] = *Q1;
        o.record["total"] = real(r.total);
        json recs = json::array();
        Table t{{"q", "worst_a", "error"}, {}};
        for (const auto& rec : r.records) {
            recs.push_back({{"q", rec.q}, {"worst_a", rec.worst_a}, {"error", real(rec.error)}});
            t.rows.push_back({std::to_string(rec.q), std::to_string(rec.worst_a), format_real(rec.error)});
        }
        o.record["records"] = std::move(recs);
        o.table = std::move(t);
        return o;
    });

    auto* probe = b.leaf(g, "probe", "error sum at Q = x^theta for a grid of theta");
    auto x2 = option<u64>(probe, "--x", "x (<= 1e8)", true);
    auto thetas = std::make_shared<std::vector<double>>();
    probe->add_option("--thetas", *thetas, "comma-separated exponents in [0, 0.9]")->delimiter(',')->required();
    b.bind(probe, [=](const Context& ctx) {
        const auto rows = level_probe(*x2, *thetas, ctx);
        Outcome o;
        o.record["x"] = *x2;
        json js = json::array();
        Table t{{"theta", "Q", "total", "normalized"}, {}};
        for (const auto& r : rows) {
            js.push_back({{"theta", real(r.theta)}, {"Q", r.Q}, {"total", real(r.total)},
                          {"normalized", real(r.normalized)}});
            t.rows.push_back({format_real(r.theta), std::to_string(r.Q), format_real(r.total),
                              format_real(r.normalized)});
        }
        o.record["rows"] = std::move(js);
        o.table = std::move(t);
        o.preferred = Format::Csv;
        return o;
    });
}

void register_figure(Builder& b, CLI::App& app) {
    auto* s = b.leaf(&app, "figure", "count-versus-approximation series for plots 1-10 (CSV)");
    auto id = option<int>(s, "id", "figure number 1..10", true);
    s->get_option("id")->check(CLI::Range(1, 10));
    auto res = option<std::size_t>(s, "--resolution", "grid points", false, std::size_t{200});
    b.bind(s, [=](const Context& ctx) {
        const auto series = figure_series(*id, *res, ctx);
        Outcome o;
        o.record["figure"] = *id;
        o.record["x"] = series.x();
        for (const auto& [name, values] : series.columns()) {
            json col = json::array();
            for (double v : values) col.push_back(real(v));
            o.record[name] = std::move(col);
        }
        o.text = series.to_csv();
        Table t;
        t.header.push_back("x");
        for (const auto& [name, _] : series.columns()) t.header.push_back(name);
        for (std::size_t i = 0; i < series.x().size(); ++i) {
            std::vector<std::string> row{std::to_string(series.x()[i])};
            for (const auto& [_, values] : series.columns()) row.push_back(format_real(values[i]));
            t.rows.push_back(std::move(row));
        }
        o.table = std::move(t);
        o.preferred = Format::Csv;
        return o;
    });
}

u64 parse_env_u64(const std::string& name, const std::string& value) {
    try {
        std::size_t used = 0;
        const auto v = std::stoull(value, &used);
        if (used != value.size()) throw std::invalid_argument(name);
        return v;
    } catch (const std::exception&) {
        throw UsageError("environment variable " + name + " is not a nonnegative integer: " + value);
    }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, const EnvLookup& env) {
    CLI::App app("Prime tuple laboratory: sieve counts, singular series, GPY sums, BV probes", "ptl");
    app.require_subcommand(1);

    std::string format;
    std::optional<u64> threads, max_x, segment_size;
    app.add_option("--format", format, "output format: text, json or csv (default depends on the command)")
        ->check(CLI::IsMember({"text", "json", "csv"}));
    app.add_option("--threads", threads, "worker threads (env PTL_THREADS)");
    app.add_option("--max-x", max_x, "largest x for counting functions (env PTL_MAX_X)");
    app.add_option("--segment-size", segment_size, "numbers per sieve segment (env PTL_SEGMENT_SIZE)");

    Action selected;
    Builder builder(selected);
    register_sieve(builder, app);
    register_count(builder, app);
    register_gaps(builder, app);
    register_analytic(builder, app);
    register_arith(builder, app);
    register_euclid(builder, app);
    register_tuples(builder, app);
    register_constants(builder, app);
    register_gpy(builder, app);
    register_bv(builder, app);
    register_figure(builder, app);

    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        Context ctx;
        if (auto v = env("PTL_MAX_X")) ctx.max_x = parse_env_u64("PTL_MAX_X", *v);
        if (auto v = env("PTL_SEGMENT_SIZE")) ctx.segment_size = parse_env_u64("PTL_SEGMENT_SIZE", *v);
        if (auto v = env("PTL_THREADS")) ctx.threads = static_cast<unsigned>(parse_env_u64("PTL_THREADS", *v));
        if (max_x) ctx.max_x = *max_x;
        if (segment_size) ctx.segment_size = *segment_size;
        if (threads) ctx.threads = static_cast<unsigned>(*threads);
        if (ctx.threads == 0) throw UsageError("thread count must be positive");
        if (ctx.segment_size == 0) throw UsageError("segment size must be positive");
        if (!selected) throw UsageError("no command given");

        const Outcome result = selected(ctx);
        Format fmt = result.preferred;
        if (format == "text") fmt = Format::Text;
        if (format == "json") fmt = Format::Json;
        if (format == "csv") fmt = Format::Csv;

        switch (fmt) {
            case Format::Text:
                if (result.text)
                    out << *result.text;
                else
                    out << result.record.dump(2) << '\n';
                break;
            case Format::Json:
                out << result.record.dump(2) << '\n';
                break;
            case Format::Csv:
                out << render_csv(result.table ? *result.table : flatten(result.record));
                break;
        }
        return kExitOk;
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitResource;
    } catch (const std::bad_alloc&) {
        err << "error: out of memory\n";
        return kExitResource;
    }
}

}  // namespace ptl::cli
