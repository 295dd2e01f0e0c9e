#include "ptl/arith.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "ptl/error.hpp"
#include "ptl/numeric.hpp"
#include "ptl/sieve.hpp"

namespace ptl {

namespace {

// Trial-division primes cover every n <= 2^40 without touching the segmented sieve.
constexpr std::uint64_t kTrialCache = 1u << 20;

void divide_out(std::uint64_t& m, std::uint64_t p, Factorization& f) {
    unsigned e = 0;
    while (m % p == 0) {
        m /= p;
        ++e;
    }
    if (e) f.factors.push_back({p, e});
}

}  // namespace

Factorization factorize(std::uint64_t n) {
    if (n == 0) throw DomainError("factorize requires n >= 1");
    Factorization f;
    f.n = n;
    std::uint64_t m = n;

    const auto primes = base_primes(kTrialCache);
    for (std::uint32_t p : *primes) {
        if (std::uint64_t{p} * p > m) break;
        divide_out(m, p, f);
    }

    // Past the cache, keep trial dividing with freshly sieved windows of primes.
    std::uint64_t next = primes->back() + 1;
    constexpr std::uint64_t window = 1u << 20;
    Context serial;
    serial.threads = 1;
    serial.segment_size = window;
    while (m > 1 && next <= isqrt(m)) {
        const std::uint64_t hi = std::min(isqrt(m), next + window - 1);
        for_each_segment(next, hi, 0, serial, [&](std::size_t, const SegmentView& seg) {
            seg.for_each_prime(seg.lo(), seg.hi(), [&](std::uint64_t p) {
                if (p * p <= m) divide_out(m, p, f);
            });
        });
        next = hi + 1;
    }
    if (m > 1) f.factors.push_back({m, 1});
    return f;
}

bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    const auto f = factorize(n);
    return f.factors.size() == 1 && f.factors[0].exponent == 1;
}

int mobius(std::uint64_t n) {
    if (n == 0) throw DomainError("mobius requires n >= 1");
    const auto f = factorize(n);
    for (const auto& pp : f.factors)
        if (pp.exponent > 1) return 0;
    return (f.factors.size() % 2) ? -1 : 1;
}

std::uint64_t euler_phi(std::uint64_t q) {
    if (q == 0) throw DomainError("euler_phi requires q >= 1");
    std::uint64_t phi = q;
    for (const auto& pp : factorize(q).factors) phi = phi / pp.prime * (pp.prime - 1);
    return phi;
}

double von_mangoldt(std::uint64_t n) {
    if (n == 0) throw DomainError("von_mangoldt requires n >= 1");
    const auto f = factorize(n);
    if (f.factors.size() != 1) return 0.0;
    return std::log(static_cast<double>(f.factors[0].prime));
}

double generalized_von_mangoldt(std::uint64_t n, unsigned k, const Context& ctx) {
    if (n == 0) throw DomainError("generalized_von_mangoldt requires n >= 1");
    if (k == 0) throw DomainError("generalized_von_mangoldt requires k >= 1");
    if (n > kGeneralizedMangoldtMax)
        throw ResourceError("generalized_von_mangoldt: n exceeds 10^12");

    const auto f = factorize(n);
    const std::size_t omega = f.factors.size();
    if (omega >= 63 || (std::uint64_t{1} << omega) > ctx.divisor_budget)
        throw ResourceError("generalized_von_mangoldt: " + std::to_string(omega) +
                            " distinct primes exceed the divisor budget");

    std::vector<double> log_p(omega);
    for (std::size_t i = 0; i < omega; ++i)
        log_p[i] = std::log(static_cast<double>(f.factors[i].prime));
    const double log_n = std::log(static_cast<double>(n));

    // mu(d) vanishes unless d is squarefree, so walk subsets of the distinct primes.
    double sum = 0.0;
    const std::uint64_t subsets = std::uint64_t{1} << omega;
    for (std::uint64_t mask = 0; mask < subsets; ++mask) {
        double log_d = 0.0;
        for (std::size_t i = 0; i < omega; ++i)
            if (mask >> i & 1) log_d += log_p[i];
        const double term = std::pow(log_n - log_d, static_cast<int>(k));
        sum += (__builtin_popcountll(mask) % 2) ? -term : term;
    }
    return sum;
}

EuclidStep euclid_step(std::span<const std::uint64_t> primes) {
    if (primes.empty()) throw DomainError("euclid_step requires at least one prime");
    std::set<std::uint64_t> seen;
    std::uint64_t product = 1;
    for (auto p : primes) {
        if (!is_prime(p)) throw DomainError("euclid_step: " + std::to_string(p) + " is not prime");
        if (!seen.insert(p).second)
            throw DomainError("euclid_step: duplicate prime " + std::to_string(p));
        if (__builtin_mul_overflow(product, p, &product))
            throw OverflowError("euclid_step: product exceeds 64 bits");
    }
    if (product == UINT64_MAX) throw OverflowError("euclid_step: product + 1 exceeds 64 bits");

    EuclidStep out;
    out.N = product + 1;
    for (const auto& pp : factorize(out.N).factors) out.new_primes.push_back(pp.prime);
    return out;
}

void mobius_segment(std::uint64_t lo, std::uint64_t hi, std::span<std::int8_t> out) {
    if (lo == 0) throw DomainError("mobius_segment requires lo >= 1");
    if (hi < lo) return;
    const std::size_t n = static_cast<std::size_t>(hi - lo + 1);
    if (out.size() < n) throw DomainError("mobius_segment: output span too small");

    // rest[i] tracks the unfactored part of lo + i after removing the base primes.
    std::vector<std::uint64_t> rest(n);
    for (std::size_t i = 0; i < n; ++i) {
        rest[i] = lo + i;
        out[i] = 1;
    }
    const auto primes = base_primes(isqrt(hi));
    for (std::uint32_t p32 : *primes) {
        const std::uint64_t p = p32;
        if (p * p > hi) break;
        for (std::uint64_t m = (lo + p - 1) / p * p; m <= hi; m += p) {
            const std::size_t i = static_cast<std::size_t>(m - lo);
            out[i] = static_cast<std::int8_t>(-out[i]);
            rest[i] /= p;
        }
        const std::uint64_t sq = p * p;
        for (std::uint64_t m = (lo + sq - 1) / sq * sq; m <= hi; m += sq)
            out[static_cast<std::size_t>(m - lo)] = 0;
    }
    // A leftover factor above sqrt(hi) is a single prime.
    for (std::size_t i = 0; i < n; ++i)
        if (out[i] != 0 && rest[i] > 1) out[i] = static_cast<std::int8_t>(-out[i]);
}

}  // namespace ptl
