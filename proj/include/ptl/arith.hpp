#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ptl/context.hpp"

namespace ptl {

struct PrimePower {
    std::uint64_t prime;
    unsigned exponent;
    friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

/// n = prod prime^exponent, primes strictly increasing. Empty for n = 1.
struct Factorization {
    std::uint64_t n = 1;
    std::vector<PrimePower> factors;
};

/// Deterministic trial division by sieved primes up to sqrt(n). Rejects n = 0.
Factorization factorize(std::uint64_t n);

/// Primality by the same trial division; no probabilistic shortcuts.
bool is_prime(std::uint64_t n);

int mobius(std::uint64_t n);
std::uint64_t euler_phi(std::uint64_t q);

/// log p when n = p^m (m >= 1), otherwise 0.
double von_mangoldt(std::uint64_t n);

/// Largest n accepted by generalized_von_mangoldt.
inline constexpr std::uint64_t kGeneralizedMangoldtMax = 1'000'000'000'000ULL;

/// Lambda_k(n) = sum_{d | n} mu(d) (log(n/d))^k, evaluated over the squarefree divisors.
/// Throws ResourceError when 2^omega(n) exceeds ctx.divisor_budget or n > 10^12.
double generalized_von_mangoldt(std::uint64_t n, unsigned k, const Context& ctx = {});

struct EuclidStep {
    std::uint64_t N;                      // product of the inputs plus one
    std::vector<std::uint64_t> new_primes;  // distinct prime factors of N, ascending
};

/// Euclid's construction: N = p_1 p_2 ... p_n + 1 and its prime factors.
EuclidStep euclid_step(std::span<const std::uint64_t> primes);

/// mu(n) for every n in [lo, hi], written to out[n - lo]. Memory is the caller's.
void mobius_segment(std::uint64_t lo, std::uint64_t hi, std::span<std::int8_t> out);

}  // namespace ptl
