#pragma once

#include <cstdint>

#include "ptl/context.hpp"
#include "ptl/rational.hpp"

namespace ptl {

struct QuadratureResult {
    double value = 0.0;
    double abs_error_estimate = 0.0;
    std::uint64_t evaluations = 0;
};

/// Adaptive Simpson for the integral of (log t)^-k over [a, b], 2 <= a <= b.
/// `tol` is absolute. Throws ConvergenceError if it cannot be met.
QuadratureResult integrate_inverse_log_power(double a, double b, unsigned k, double tol);

/// li(x) = integral from 2 to x of dt / log t. A tol <= 0 selects
/// ctx.quad_rel_tol relative to the size of the integral.
QuadratureResult li(double x, double tol = 0.0, const Context& ctx = {});

/// li_k(x) = integral from 2 to x of dt / (log t)^k.
QuadratureResult li_k(double x, unsigned k, double tol = 0.0, const Context& ctx = {});

/// First m terms of the asymptotic expansion sum_{j=1..m} (j-1)! x / (log x)^j.
double li_asymptotic(double x, unsigned m);

/// prod_{p <= P} (1 - 1/p) in double precision.
double mertens_product(std::uint64_t P, const Context& ctx = {});

/// The same product as an exact fraction. Throws OverflowError once the
/// reduced denominator no longer fits 128 bits (from P = 131 on).
Rational mertens_product_exact(std::uint64_t P);

/// sum_{d | 2*3*5*...*P} mu(d)/d as an exact fraction, via inclusion-exclusion over
/// every squarefree divisor of the primorial. At most 2^20 divisors (P <= 72).
Rational mobius_divisor_sum(std::uint64_t P);

/// sum_{n <= N} mu(n)/n, N <= 10^8.
double mobius_partial_sum(std::uint64_t N, const Context& ctx = {});

/// sum_{n <= N} 1/n.
double harmonic_sum(std::uint64_t N, const Context& ctx = {});

enum class BrunVariant {
    Members,  // each prime belonging to some twin pair counted once (5 once)
    Pairs,    // classical pair sum 1/p + 1/(p+2) over pairs with p + 2 <= x (5 twice)
};

/// Partial sum of reciprocals of twin primes up to x.
double brun_partial_sum(std::uint64_t x, BrunVariant variant = BrunVariant::Members,
                        const Context& ctx = {});

struct EulerProductCheck {
    double sum_side = 0.0;      // sum_{n <= N} n^-z
    double product_side = 0.0;  // prod_{p <= P} (1 - p^-z)^-1
};

EulerProductCheck euler_product_check(double z, std::uint64_t P, std::uint64_t N,
                                      const Context& ctx = {});

}  // namespace ptl
