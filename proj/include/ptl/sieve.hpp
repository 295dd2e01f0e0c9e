#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "ptl/context.hpp"

namespace ptl {

class ShiftTuple;

/// Largest value accepted by the segmented sieve (base primes stay below 10^6).
inline constexpr std::uint64_t kSieveLimit = 1'000'000'000'000ULL;

/// Primes <= limit from a process-wide cache that grows on demand.
/// The returned vector is immutable and may be shared across threads.
std::shared_ptr<const std::vector<std::uint32_t>> base_primes(std::uint64_t limit);

/// One sieved window. Numbers in [lo, hi] belong to the segment; primality is
/// also known for (hi, ext_hi], the overlap needed by shifted-tuple scans.
class SegmentView {
public:
    SegmentView(std::uint64_t lo, std::uint64_t hi, std::uint64_t ext_hi,
                std::uint64_t odd_base, std::span<const std::uint8_t> odd_flags)
        : lo_(lo), hi_(hi), ext_hi_(ext_hi), odd_base_(odd_base), flags_(odd_flags) {}

    std::uint64_t lo() const { return lo_; }
    std::uint64_t hi() const { return hi_; }
    std::uint64_t ext_hi() const { return ext_hi_; }

    /// Valid for n in [lo, ext_hi].
    bool is_prime(std::uint64_t n) const {
        if (n == 2) return true;
        if (n < 2 || (n & 1) == 0) return false;
        return flags_[(n - odd_base_) >> 1] != 0;
    }

    /// Calls fn(p) for every prime p in [a, b], ascending; [a, b] must lie in [lo, ext_hi].
    template <class Fn>
    void for_each_prime(std::uint64_t a, std::uint64_t b, Fn&& fn) const {
        if (a > b) return;
        if (a <= 2 && b >= 2) fn(std::uint64_t{2});
        std::uint64_t first = a | 1;
        if (first < 3) first = 3;
        if (first > b || flags_.empty()) return;
        std::size_t i = (first - odd_base_) >> 1;
        const std::size_t last = (b - odd_base_) >> 1;
        for (; i <= last; ++i)
            if (flags_[i]) fn(odd_base_ + 2 * i);
    }

    std::size_t count_primes() const;

private:
    std::uint64_t lo_, hi_, ext_hi_, odd_base_;
    std::span<const std::uint8_t> flags_;
};

/// Number of segments covering [lo, hi] at the given segment size.
std::size_t segment_count(std::uint64_t lo, std::uint64_t hi, std::uint64_t segment_size);

/// Sieves [lo, hi] window by window, calling fn(index, segment) for each. The
/// i-th segment owns [lo + i*S, min(hi, lo + (i+1)*S - 1)] and is sieved
/// `overlap` numbers past its end. Calls may run concurrently on
/// ctx.threads workers; write results into per-index slots.
void for_each_segment(std::uint64_t lo, std::uint64_t hi, std::uint64_t overlap,
                      const Context& ctx,
                      const std::function<void(std::size_t, const SegmentView&)>& fn);

/// Immutable primality table over [lo, hi], stored as a bitset over odd numbers.
class PrimeTable {
public:
    std::uint64_t lo() const { return lo_; }
    std::uint64_t hi() const { return hi_; }
    std::size_t size() const { return count_; }

    /// Throws DomainError when n lies outside [lo, hi].
    bool contains(std::uint64_t n) const;
    std::vector<std::uint64_t> primes() const;

    template <class Fn>
    void for_each(Fn&& fn) const {
        if (lo_ <= 2 && hi_ >= 2) fn(std::uint64_t{2});
        for (std::size_t w = 0; w < bits_.size(); ++w) {
            std::uint64_t word = bits_[w];
            while (word) {
                const int b = __builtin_ctzll(word);
                fn(odd_base_ + 2 * (64 * w + static_cast<std::size_t>(b)));
                word &= word - 1;
            }
        }
    }

    friend bool operator==(const PrimeTable&, const PrimeTable&) = default;

private:
    friend PrimeTable sieve_range(std::uint64_t, std::uint64_t, const Context&);
    std::uint64_t lo_ = 2, hi_ = 2, odd_base_ = 3;
    std::size_t count_ = 0;
    std::vector<std::uint64_t> bits_;
};

PrimeTable sieve_range(std::uint64_t lo, std::uint64_t hi, const Context& ctx = {});

/// pi(x): number of primes <= x.
std::uint64_t prime_count(std::uint64_t x, const Context& ctx = {});

/// The n-th prime, p_1 = 2.
std::uint64_t nth_prime(std::uint64_t n, const Context& ctx = {});

/// pi_2(x): primes p <= x with p + 2 also prime (pairs counted by smaller member).
std::uint64_t twin_count(std::uint64_t x, const Context& ctx = {});

/// pi(x; H): number of n in [1, x] with n + h prime for every shift h.
std::uint64_t tuple_count(std::uint64_t x, const ShiftTuple& shifts, const Context& ctx = {});

/// pi(x; q, a): primes p <= x with p = a (mod q).
std::uint64_t prime_count_ap(std::uint64_t x, std::uint64_t q, std::uint64_t a,
                             const Context& ctx = {});

struct GapRecord {
    std::uint64_t n;       // index of p_n
    std::uint64_t p;
    std::uint64_t next;
    double normalized_gap;  // (next - p) / log p
};

struct GapSummary {
    std::vector<GapRecord> records;
    double min_normalized = 0.0;
    std::size_t min_index = 0;  // position in `records` of the smallest normalized gap
    double mean_gap = 0.0;
};

/// Consecutive-prime gaps for every pair of primes inside [x_lo, x_hi].
GapSummary gap_statistics(std::uint64_t x_lo, std::uint64_t x_hi, const Context& ctx = {});

}  // namespace ptl
