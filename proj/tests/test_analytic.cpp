#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "ptl/analytic.hpp"
#include "ptl/error.hpp"
#include "ptl/sieve.hpp"

using namespace ptl;
using u64 = std::uint64_t;

TEST_CASE("li basics") {
    CHECK(li(2.0).value == 0.0);
    const auto r = li(1e6);
    const double pi = static_cast<double>(prime_count(1'000'000));
    CHECK(r.value - pi > 0);
    CHECK(r.value - pi < 200);
    CHECK(r.abs_error_estimate <= 1e-9 * r.value);
    CHECK(r.evaluations > 0);
    CHECK_THROWS_AS(li(1.5), DomainError);
}

TEST_CASE("li(4) against fixed-grid Simpson") {
    const double ref = oracle::simpson(2.0, 4.0, 1, 20000);
    CHECK(std::fabs(li(4.0, 1e-12).value - ref) < 1e-8);
    const double ref3 = oracle::simpson(2.0, 50.0, 3, 200000);
    CHECK(std::fabs(li_k(50.0, 3, 1e-12).value - ref3) < 1e-8);
}

TEST_CASE("li_k") {
    for (unsigned k = 1; k <= 6; ++k) CHECK(li_k(2.0, k).value == 0.0);
    CHECK(li_k(10.0, 1).value == doctest::Approx(li(10.0).value).epsilon(1e-12));
    const double tol = 1e-8;
    for (double x : {3.0, 17.5, 1e3, 1e5}) CHECK(std::fabs(li_k(x, 1, tol).value - li(x, tol).value) <= 2 * tol);
    const double pi2 = static_cast<double>(twin_count(1'000'000));
    CHECK(1.32032362 * li_k(1e6, 2).value > pi2);
    CHECK_THROWS_AS(li_k(10.0, 0), DomainError);
}

TEST_CASE("quadrature agrees with a doubled-resolution evaluation") {
    const double tol = 1e-7;
    for (int i = 0; i < 20; ++i) {
        const double x = 2.0 * std::pow(10.0, 0.3 * i);
        const double coarse = li(x, tol).value;
        // Twice the panels: integrate the two halves separately at half tolerance each.
        const double mid = 0.5 * (2.0 + x);
        const double fine = integrate_inverse_log_power(2.0, mid, 1, tol / 4).value +
                            integrate_inverse_log_power(mid, x, 1, tol / 4).value;
        CHECK(std::fabs(coarse - fine) <= 2 * tol);
    }
}

TEST_CASE("li exceeds x/log x on a decade grid") {
    for (double x = 10; x <= 1e6; x *= 10) CHECK(li(x).value > x / std::log(x));
}

TEST_CASE("asymptotic expansion of li") {
    CHECK(li_asymptotic(1e6, 1) == doctest::Approx(1e6 / std::log(1e6)).epsilon(1e-15));
    const double L = li(1e6).value;
    CHECK(std::fabs(li_asymptotic(1e6, 2) - L) < std::fabs(li_asymptotic(1e6, 1) - L));
    // Terms grow once (j-1)! beats (log 100)^j; fifty terms are far off.
    const double L100 = li(100.0).value;
    CHECK(std::fabs(li_asymptotic(100.0, 50) - L100) > 1e6 * std::fabs(li_asymptotic(100.0, 4) - L100));
    CHECK_THROWS_AS(li_asymptotic(1.0, 3), DomainError);
}

TEST_CASE("Mertens products") {
    CHECK(mertens_product_exact(3) == Rational(1, 3));
    CHECK(mertens_product_exact(5) == Rational(4, 15));
    CHECK(mertens_product_exact(2) == Rational(1, 2));
    CHECK(mertens_product_exact(4) == Rational(1, 3));
    CHECK(mertens_product(5) == doctest::Approx(4.0 / 15.0).epsilon(1e-15));
    const double m97 = mertens_product(97);
    CHECK(m97 >= 0.115);
    CHECK(m97 <= 0.125);
    const double m9973 = mertens_product(9973);
    CHECK(m9973 >= 0.055);
    CHECK(m9973 <= 0.065);
    double prev = 1.0;
    for (u64 p : oracle::primes_upto(2000)) {
        const double v = mertens_product(p);
        CHECK(v < prev);
        prev = v;
    }
    CHECK(mertens_product_exact(97).to_double() == doctest::Approx(m97).epsilon(1e-13));
    CHECK_THROWS_AS(mertens_product_exact(1'000'000), OverflowError);
    CHECK_THROWS_AS(mertens_product_exact(1), DomainError);
    CHECK_THROWS_AS(mertens_product(1), DomainError);
}

TEST_CASE("Moebius divisor sum equals the Mertens product exactly") {
    CHECK(mobius_divisor_sum(2) == Rational(1, 2));
    CHECK(mobius_divisor_sum(5) == Rational(4, 15));
    CHECK(mobius_divisor_sum(30) == mertens_product_exact(29));
    for (u64 p : oracle::primes_upto(71)) CHECK(mobius_divisor_sum(p) == mertens_product_exact(p));
    CHECK_THROWS_AS(mobius_divisor_sum(80), ResourceError);
}

TEST_CASE("Moebius partial sums") {
    CHECK(mobius_partial_sum(1) == 1.0);
    CHECK(mobius_partial_sum(2) == 0.5);
    double ref = 0;
    for (u64 n = 1; n <= 5000; ++n) ref += oracle::mobius(n) / static_cast<double>(n);
    CHECK(mobius_partial_sum(5000) == doctest::Approx(ref).epsilon(1e-12));
    CHECK(std::fabs(mobius_partial_sum(1'000'000)) < 0.01);
    CHECK_THROWS_AS(mobius_partial_sum(100'000'001), ResourceError);
}

TEST_CASE("harmonic sums") {
    CHECK(harmonic_sum(1) == 1.0);
    CHECK(harmonic_sum(2) == 1.5);
    const double g = harmonic_sum(1'000'000) - std::log(1e6);
    CHECK(g >= 0.57);
    CHECK(g <= 0.58);
    CHECK_THROWS_AS(harmonic_sum(0), DomainError);
}

TEST_CASE("Brun partial sums") {
    const double listed = 1.0 / 3 + 1.0 / 5 + 1.0 / 7 + 1.0 / 11 + 1.0 / 13 + 1.0 / 17 + 1.0 / 19 + 1.0 / 29 + 1.0 / 31;
    CHECK(brun_partial_sum(31) == doctest::Approx(listed).epsilon(1e-15));
    CHECK(brun_partial_sum(4) == doctest::Approx(1.0 / 3).epsilon(1e-15));
    CHECK(brun_partial_sum(2) == 0.0);
    // Pairs convention: 5 appears in (3,5) and (5,7); a pair counts once its upper member is <= x.
    CHECK(brun_partial_sum(5, BrunVariant::Pairs) == doctest::Approx(1.0 / 3 + 1.0 / 5).epsilon(1e-15));
    CHECK(brun_partial_sum(7, BrunVariant::Pairs) == doctest::Approx(1.0 / 3 + 2.0 / 5 + 1.0 / 7).epsilon(1e-15));
    double prev_m = 0, prev_p = 0;
    for (u64 x = 1; x <= 2000; x += 13) {
        const double m = brun_partial_sum(x);
        const double p = brun_partial_sum(x, BrunVariant::Pairs);
        CHECK(m >= prev_m);
        CHECK(p >= prev_p);
        prev_m = m;
        prev_p = p;
    }
    const double members = brun_partial_sum(10'000'000);
    const double pairs = brun_partial_sum(10'000'000, BrunVariant::Pairs);
    CHECK(members < 1.92016);
    CHECK(pairs < 1.92016);
    CHECK(pairs > members);
}

TEST_CASE("Euler product check") {
    const auto a = euler_product_check(2.0, 1'000'000, 1'000'000);
    CHECK(std::fabs(a.sum_side - a.product_side) < 2e-6);
    const auto b = euler_product_check(4.0, 1000, 1000);
    CHECK(std::fabs(b.sum_side - b.product_side) < 1e-9);
    const auto c = euler_product_check(3.0, 2, 1);
    CHECK(c.sum_side == 1.0);
    CHECK(c.product_side == doctest::Approx(1.0 / (1.0 - 1.0 / 8.0)).epsilon(1e-15));
    CHECK(c.product_side > 1.0);
    CHECK_THROWS_AS(euler_product_check(1.2, 10, 10), DomainError);
    CHECK_THROWS_AS(euler_product_check(2.0, 10'000'001, 10), ResourceError);
}
