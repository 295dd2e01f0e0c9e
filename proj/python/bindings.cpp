#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ptl/analytic.hpp"
#include "ptl/arith.hpp"
#include "ptl/error.hpp"
#include "ptl/gpy.hpp"
#include "ptl/progressions.hpp"
#include "ptl/series.hpp"
#include "ptl/sieve.hpp"
#include "ptl/tuples.hpp"

namespace py = pybind11;
using namespace ptl;
using u64 = std::uint64_t;

namespace {

using Release = py::call_guard<py::gil_scoped_release>;

py::object fraction(const Rational& r) {
    static auto Fraction = py::module_::import("fractions").attr("Fraction");
    auto to_int = py::module_::import("builtins").attr("int");
    return Fraction(to_int(to_string(r.num())), to_int(to_string(r.den())));
}

Approximation approx_from(const std::string& s) {
    if (s == "product") return Approximation::Product;
    if (s == "sieve") return Approximation::Sieve;
    throw DomainError("approx must be 'product' or 'sieve'");
}

GpyParams gpy_params(u64 N, const std::vector<u64>& shifts, double R, unsigned ell, unsigned r) {
    GpyParams p;
    p.N = N;
    p.shifts = ShiftTuple(shifts);
    p.R = R > 0 ? R : default_truncation(N, static_cast<unsigned>(p.shifts.size()));
    p.ell = ell;
    p.r = r;
    return p;
}

py::dict report_dict(const DetectionReport& rep) {
    py::list witnesses;
    for (const auto& w : rep.witnesses) {
        py::dict d;
        d["n"] = w.n;
        d["weight"] = w.weight;
        d["prime_shifts"] = w.prime_shifts;
        d["prime_power_shifts"] = w.prime_power_shifts;
        d["certificate"] = w.certificate;
        witnesses.append(d);
    }
    py::dict out;
    out["sum_value"] = rep.sum_value;
    out["positive"] = rep.positive;
    out["normalized"] = rep.normalized ? py::cast(*rep.normalized) : py::none();
    out["k"] = rep.k;
    out["R"] = rep.params.R;
    out["witnesses"] = witnesses;
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Prime counting, singular series, GPY sums and progression error sums";

    // Translators run newest first, so the base class is registered before its subclasses.
    auto& base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<ResourceError>(m, "ResourceError", base.ptr());
    py::register_exception<OverflowError>(m, "ArithmeticOverflow", base.ptr());
    py::register_exception<ConvergenceError>(m, "ConvergenceError", base.ptr());

    // arith
    m.def("factorize", [](u64 n) {
        std::vector<std::pair<u64, unsigned>> out;
        for (const auto& pp : factorize(n).factors) out.emplace_back(pp.prime, pp.exponent);
        return out;
    }, py::arg("n"));
    m.def("is_prime", &is_prime, py::arg("n"));
    m.def("mobius", &mobius, py::arg("n"));
    m.def("euler_phi", &euler_phi, py::arg("q"));
    m.def("von_mangoldt", &von_mangoldt, py::arg("n"));
    m.def("generalized_von_mangoldt", [](u64 n, unsigned k) { return generalized_von_mangoldt(n, k); },
          py::arg("n"), py::arg("k"));
    m.def("euclid_step", [](const std::vector<u64>& primes) {
        const auto s = euclid_step(primes);
        return py::make_tuple(s.N, s.new_primes);
    }, py::arg("primes"));

    // sieve
    m.def("primes", [](u64 lo, u64 hi) { return sieve_range(lo, hi).primes(); }, py::arg("lo"), py::arg("hi"),
          Release());
    m.def("prime_count", [](u64 x) { return prime_count(x); }, py::arg("x"), Release());
    m.def("twin_count", [](u64 x) { return twin_count(x); }, py::arg("x"), Release());
    m.def("nth_prime", [](u64 n) { return nth_prime(n); }, py::arg("n"), Release());
    m.def("tuple_count", [](u64 x, const std::vector<u64>& shifts) { return tuple_count(x, ShiftTuple(shifts)); },
          py::arg("x"), py::arg("shifts"), Release());
    m.def("prime_count_ap", [](u64 x, u64 q, u64 a) { return prime_count_ap(x, q, a); }, py::arg("x"),
          py::arg("q"), py::arg("a"), Release());
    m.def("gap_statistics", [](u64 lo, u64 hi) {
        const auto g = gap_statistics(lo, hi);
        py::list records;
        for (const auto& r : g.records) records.append(py::make_tuple(r.n, r.p, r.next, r.normalized_gap));
        py::dict d;
        d["records"] = records;
        d["min_normalized"] = g.min_normalized;
        d["mean_gap"] = g.mean_gap;
        return d;
    }, py::arg("lo"), py::arg("hi"));

    // analytic
    m.def("li", [](double x, double tol) { return li(x, tol).value; }, py::arg("x"), py::arg("tol") = 0.0);
    m.def("li_k", [](double x, unsigned k, double tol) { return li_k(x, k, tol).value; }, py::arg("x"),
          py::arg("k"), py::arg("tol") = 0.0);
    m.def("li_asymptotic", &li_asymptotic, py::arg("x"), py::arg("m"));
    m.def("mertens_product", [](u64 P) { return mertens_product(P); }, py::arg("P"));
    m.def("mertens_product_exact", [](u64 P) { return fraction(mertens_product_exact(P)); }, py::arg("P"));
    m.def("mobius_divisor_sum", [](u64 P) { return fraction(mobius_divisor_sum(P)); }, py::arg("P"));
    m.def("mobius_partial_sum", [](u64 N) { return mobius_partial_sum(N); }, py::arg("N"), Release());
    m.def("harmonic_sum", [](u64 N) { return harmonic_sum(N); }, py::arg("N"), Release());
    m.def("brun_partial_sum", [](u64 x, const std::string& variant) {
        if (variant != "members" && variant != "pairs") throw DomainError("variant must be 'members' or 'pairs'");
        return brun_partial_sum(x, variant == "pairs" ? BrunVariant::Pairs : BrunVariant::Members);
    }, py::arg("x"), py::arg("variant") = "members");
    m.def("euler_product_check", [](double z, u64 P, u64 N) {
        const auto r = euler_product_check(z, P, N);
        return py::make_tuple(r.sum_side, r.product_side);
    }, py::arg("z"), py::arg("P"), py::arg("N"));

    // tuples
    m.def("nu_p", [](const std::vector<u64>& shifts, u64 p) { return nu_p(ShiftTuple(shifts), p); },
          py::arg("shifts"), py::arg("p"));
    m.def("is_admissible", [](const std::vector<u64>& shifts) { return is_admissible(ShiftTuple(shifts)); },
          py::arg("shifts"));
    m.def("covering_prime", [](const std::vector<u64>& shifts) { return covering_prime(ShiftTuple(shifts)); },
          py::arg("shifts"));
    m.def("singular_series", [](const std::vector<u64>& shifts, u64 cutoff) {
        const auto s = singular_series(ShiftTuple(shifts), cutoff);
        py::dict d;
        d["value"] = s.value;
        d["cutoff"] = s.cutoff;
        d["tail_bound"] = s.tail_bound;
        d["admissible"] = s.admissible;
        return d;
    }, py::arg("shifts"), py::arg("cutoff") = 10'000'000);
    m.def("twin_prime_constant", [](u64 cutoff) { return twin_prime_constant(cutoff); },
          py::arg("cutoff") = 10'000'000, Release());
    m.def("hl_prediction", [](double x, const std::vector<u64>& shifts, u64 cutoff) {
        return hl_prediction(x, ShiftTuple(shifts), cutoff).value;
    }, py::arg("x"), py::arg("shifts"), py::arg("cutoff") = 10'000'000);
    m.def("narrowest_admissible", [](unsigned k, u64 max_diameter) -> std::optional<std::vector<u64>> {
        const auto t = narrowest_admissible(k, max_diameter);
        if (!t) return std::nullopt;
        return std::vector<u64>(t->shifts().begin(), t->shifts().end());
    }, py::arg("k"), py::arg("max_diameter") = kNarrowestMaxDiameter);

    // gpy
    m.def("tuple_polynomial", [](u64 n, const std::vector<u64>& shifts) {
        return py::module_::import("builtins").attr("int")(to_string(tuple_polynomial(n, ShiftTuple(shifts))));
    }, py::arg("n"), py::arg("shifts"));
    m.def("default_truncation", &default_truncation, py::arg("N"), py::arg("k"));
    m.def("lambda_R", &lambda_R, py::arg("n"), py::arg("R"));
    m.def("lambda_R_product", [](u64 n, const std::vector<u64>& shifts, double R) {
        return lambda_R_product(n, ShiftTuple(shifts), R);
    }, py::arg("n"), py::arg("shifts"), py::arg("R"));
    m.def("lambda_R_sieve", [](u64 n, const std::vector<u64>& shifts, unsigned ell, double R) {
        return lambda_R_sieve(n, ShiftTuple(shifts), ell, R);
    }, py::arg("n"), py::arg("shifts"), py::arg("ell"), py::arg("R"));
    m.def("first_moment", [](u64 N, const std::vector<u64>& shifts, double R, unsigned ell, const std::string& a) {
        return first_moment(gpy_params(N, shifts, R, ell, 1), approx_from(a));
    }, py::arg("N"), py::arg("shifts"), py::arg("R") = 0.0, py::arg("ell") = 0, py::arg("approx") = "product");
    m.def("second_moment",
          [](u64 N, const std::vector<u64>& shifts, u64 h0, double R, unsigned ell, const std::string& a) {
              return second_moment(gpy_params(N, shifts, R, ell, 1), h0, approx_from(a));
          },
          py::arg("N"), py::arg("shifts"), py::arg("h0"), py::arg("R") = 0.0, py::arg("ell") = 0,
          py::arg("approx") = "product");
    m.def("detection_sum",
          [](u64 N, const std::vector<u64>& shifts, double R, unsigned ell, unsigned r, const std::string& a) {
              return report_dict(detection_sum(gpy_params(N, shifts, R, ell, r), approx_from(a)));
          },
          py::arg("N"), py::arg("shifts"), py::arg("R") = 0.0, py::arg("ell") = 0, py::arg("r") = 1,
          py::arg("approx") = "product");
    m.def("detection_sum_interval",
          [](u64 N, u64 h, unsigned k, unsigned ell, double R, unsigned r, const std::string& a) {
              const double RR = R > 0 ? R : default_truncation(N, k);
              return report_dict(detection_sum_interval(N, h, k, ell, RR, r, approx_from(a)));
          },
          py::arg("N"), py::arg("h"), py::arg("k"), py::arg("ell") = 0, py::arg("R") = 0.0, py::arg("r") = 1,
          py::arg("approx") = "sieve");

    // progressions
    m.def("ap_expected", [](double x, u64 q) { return ap_expected(x, q); }, py::arg("x"), py::arg("q"));
    m.def("bv_sum", [](u64 x, u64 Q) {
        const auto r = bv_sum(x, Q);
        py::list records;
        for (const auto& rec : r.records) records.append(py::make_tuple(rec.q, rec.worst_a, rec.error));
        return py::make_tuple(r.total, records);
    }, py::arg("x"), py::arg("Q"));
    m.def("level_probe", [](u64 x, const std::vector<double>& thetas) {
        py::list rows;
        for (const auto& row : level_probe(x, thetas))
            rows.append(py::make_tuple(row.theta, row.Q, row.total, row.normalized));
        return rows;
    }, py::arg("x"), py::arg("thetas"));

    m.def("figure_csv", [](int id, std::size_t resolution) { return figure_series(id, resolution).to_csv(); },
          py::arg("figure_id"), py::arg("resolution") = 200, Release());
}
