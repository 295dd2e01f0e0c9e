#include "ptl/sieve.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <string>

#include "ptl/error.hpp"
#include "ptl/numeric.hpp"
#include "ptl/parallel.hpp"
#include "ptl/tuples.hpp"

namespace ptl {

namespace {

std::vector<std::uint32_t> simple_sieve(std::uint64_t limit) {
    std::vector<std::uint8_t> composite(limit + 1, 0);
    std::vector<std::uint32_t> primes;
    for (std::uint64_t i = 2; i <= limit; ++i) {
        if (composite[i]) continue;
        primes.push_back(static_cast<std::uint32_t>(i));
        for (std::uint64_t m = i * i; m <= limit; m += i) composite[m] = 1;
    }
    return primes;
}

// Fills `flags` with primality of the odd numbers in [a, b]; returns the first odd >= a.
std::uint64_t sieve_window(std::uint64_t a, std::uint64_t b, const std::vector<std::uint32_t>& base,
                           std::vector<std::uint8_t>& flags) {
    const std::uint64_t odd_base = (a & 1) ? a : a + 1;
    if (b < odd_base) {
        flags.clear();
        return odd_base;
    }
    const std::size_t n = static_cast<std::size_t>((b - odd_base) / 2 + 1);
    flags.assign(n, 1);
    for (std::size_t k = 1; k < base.size(); ++k) {
        const std::uint64_t p = base[k];
        if (p * p > b) break;
        std::uint64_t start = p * p;
        if (start < odd_base) start = (odd_base + p - 1) / p * p;
        if ((start & 1) == 0) start += p;
        for (std::uint64_t m = start; m <= b; m += 2 * p) flags[(m - odd_base) >> 1] = 0;
    }
    if (odd_base == 1) flags[0] = 0;
    return odd_base;
}

void check_max(std::uint64_t x, const Context& ctx, const char* what) {
    if (x > ctx.max_x)
        throw ResourceError(std::string(what) + ": " + std::to_string(x) +
                            " exceeds configured maximum " + std::to_string(ctx.max_x));
}

}  // namespace

std::shared_ptr<const std::vector<std::uint32_t>> base_primes(std::uint64_t limit) {
    static std::mutex mutex;
    static std::shared_ptr<const std::vector<std::uint32_t>> cache;
    static std::uint64_t cached_limit = 0;

    std::lock_guard lock(mutex);
    if (!cache || cached_limit < limit) {
        const std::uint64_t target = std::max<std::uint64_t>({limit, 2 * cached_limit, 1u << 16});
        cache = std::make_shared<const std::vector<std::uint32_t>>(simple_sieve(target));
        cached_limit = target;
    }
    return cache;
}

std::size_t SegmentView::count_primes() const {
    std::size_t count = 0;
    for_each_prime(lo_, hi_, [&](std::uint64_t) { ++count; });
    return count;
}

std::size_t segment_count(std::uint64_t lo, std::uint64_t hi, std::uint64_t segment_size) {
    if (hi < lo) return 0;
    return static_cast<std::size_t>((hi - lo) / segment_size + 1);
}

void for_each_segment(std::uint64_t lo, std::uint64_t hi, std::uint64_t overlap,
                      const Context& ctx,
                      const std::function<void(std::size_t, const SegmentView&)>& fn) {
    if (hi < lo) return;
    if (ctx.segment_size == 0) throw DomainError("segment size must be positive");
    if (hi > kSieveLimit || overlap > kSieveLimit - hi)
        throw ResourceError("sieve range exceeds " + std::to_string(kSieveLimit));

    const std::uint64_t size = ctx.segment_size;
    const auto base = base_primes(isqrt(hi + overlap));
    const std::size_t count = segment_count(lo, hi, size);
    const unsigned workers = std::max(1u, ctx.threads);
    std::vector<std::vector<std::uint8_t>> buffers(workers);

    parallel_for(count, workers, [&](unsigned worker, std::size_t i) {
        const std::uint64_t seg_lo = lo + i * size;
        const std::uint64_t seg_hi = std::min(hi, seg_lo + (size - 1));
        const std::uint64_t ext_hi = seg_hi + overlap;
        auto& flags = buffers[worker];
        const std::uint64_t odd_base = sieve_window(seg_lo, ext_hi, *base, flags);
        fn(i, SegmentView(seg_lo, seg_hi, ext_hi, odd_base, flags));
    });
}

bool PrimeTable::contains(std::uint64_t n) const {
    if (n < lo_ || n > hi_)
        throw DomainError("value " + std::to_string(n) + " outside table range [" +
                          std::to_string(lo_) + ", " + std::to_string(hi_) + "]");
    if (n == 2) return true;
    if ((n & 1) == 0) return false;
    const std::size_t i = static_cast<std::size_t>((n - odd_base_) >> 1);
    return (bits_[i / 64] >> (i % 64)) & 1;
}

std::vector<std::uint64_t> PrimeTable::primes() const {
    std::vector<std::uint64_t> out;
    out.reserve(count_);
    for_each([&](std::uint64_t p) { out.push_back(p); });
    return out;
}

PrimeTable sieve_range(std::uint64_t lo, std::uint64_t hi, const Context& ctx) {
    if (lo < 2) throw DomainError("sieve_range requires lo >= 2");
    if (hi < lo) throw DomainError("sieve_range requires lo <= hi");
    if (hi > kSieveLimit) throw ResourceError("sieve_range: hi exceeds 10^12");
    if (hi - lo + 1 > ctx.max_table_span)
        throw ResourceError("sieve_range: span " + std::to_string(hi - lo + 1) +
                            " exceeds table budget " + std::to_string(ctx.max_table_span));

    // Segments of a multiple of 128 numbers start on 64-bit word boundaries of the bitset.
    Context local = ctx;
    local.segment_size = std::max<std::uint64_t>(128, (ctx.segment_size + 127) / 128 * 128);

    PrimeTable table;
    table.lo_ = lo;
    table.hi_ = hi;
    table.odd_base_ = (lo & 1) ? lo : lo + 1;
    const std::uint64_t n_odds = hi >= table.odd_base_ ? (hi - table.odd_base_) / 2 + 1 : 0;
    table.bits_.assign(static_cast<std::size_t>((n_odds + 63) / 64), 0);

    const std::size_t segments = segment_count(lo, hi, local.segment_size);
    std::vector<std::size_t> counts(segments, 0);
    const std::uint64_t words_per_segment = local.segment_size / 128;
    for_each_segment(lo, hi, 0, local, [&](std::size_t i, const SegmentView& seg) {
        std::uint64_t* words = table.bits_.data() + i * words_per_segment;
        const std::uint64_t seg_base = table.odd_base_ + i * local.segment_size;
        std::size_t c = 0;
        seg.for_each_prime(std::max<std::uint64_t>(seg.lo(), 3), seg.hi(), [&](std::uint64_t p) {
            const std::uint64_t j = (p - seg_base) >> 1;
            words[j / 64] |= std::uint64_t{1} << (j % 64);
            ++c;
        });
        counts[i] = c;
    });
    for (auto c : counts) table.count_ += c;
    if (lo <= 2 && hi >= 2) ++table.count_;
    return table;
}

std::uint64_t prime_count(std::uint64_t x, const Context& ctx) {
    check_max(x, ctx, "prime_count");
    if (x < 2) return 0;
    std::vector<std::uint64_t> counts(segment_count(2, x, ctx.segment_size));
    for_each_segment(2, x, 0, ctx, [&](std::size_t i, const SegmentView& seg) {
        counts[i] = seg.count_primes();
    });
    std::uint64_t total = 0;
    for (auto c : counts) total += c;
    return total;
}

std::uint64_t nth_prime(std::uint64_t n, const Context& ctx) {
    if (n == 0) throw DomainError("nth_prime requires n >= 1");
    // Rosser's bound p_n < n (log n + log log n) for n >= 6.
    double bound = 13.0;
    if (n >= 6) {
        const double ln = std::log(static_cast<double>(n));
        bound = static_cast<double>(n) * (ln + std::log(ln)) + 1.0;
    }
    const std::uint64_t upper =
        std::min<std::uint64_t>(static_cast<std::uint64_t>(std::ceil(bound)), ctx.max_x);
    if (upper < 2) throw ResourceError("nth_prime: configured maximum below 2");

    std::vector<std::uint64_t> counts(segment_count(2, upper, ctx.segment_size));
    for_each_segment(2, upper, 0, ctx, [&](std::size_t i, const SegmentView& seg) {
        counts[i] = seg.count_primes();
    });
    std::uint64_t before = 0;
    for (std::size_t i = 0; i < counts.size(); ++i) {
        if (before + counts[i] >= n) {
            const std::uint64_t seg_lo = 2 + i * ctx.segment_size;
            const std::uint64_t seg_hi = std::min(upper, seg_lo + ctx.segment_size - 1);
            Context local = ctx;
            local.max_table_span = std::max(ctx.max_table_span, seg_hi - seg_lo + 1);
            const auto primes = sieve_range(seg_lo, seg_hi, local).primes();
            return primes[static_cast<std::size_t>(n - before - 1)];
        }
        before += counts[i];
    }
    throw ResourceError("nth_prime: p_" + std::to_string(n) + " exceeds configured maximum " +
                        std::to_string(ctx.max_x));
}

std::uint64_t twin_count(std::uint64_t x, const Context& ctx) {
    return tuple_count(x, ShiftTuple({0, 2}), ctx);
}

std::uint64_t tuple_count(std::uint64_t x, const ShiftTuple& shifts, const Context& ctx) {
    const std::uint64_t first = shifts.shifts().front();
    const std::uint64_t last = shifts.shifts().back();
    if (x > ctx.max_x || last > ctx.max_x - x)
        throw ResourceError("tuple_count: x + max shift exceeds configured maximum " +
                            std::to_string(ctx.max_x));
    if (x < 1) return 0;

    std::vector<std::uint64_t> counts(segment_count(1, x, ctx.segment_size));
    for_each_segment(1, x, last, ctx, [&](std::size_t i, const SegmentView& seg) {
        std::uint64_t c = 0;
        seg.for_each_prime(seg.lo() + first, seg.hi() + first, [&](std::uint64_t q) {
            const std::uint64_t n = q - first;
            for (auto h : shifts.shifts())
                if (!seg.is_prime(n + h)) return;
            ++c;
        });
        counts[i] = c;
    });
    std::uint64_t total = 0;
    for (auto c : counts) total += c;
    return total;
}

std::uint64_t prime_count_ap(std::uint64_t x, std::uint64_t q, std::uint64_t a,
                             const Context& ctx) {
    if (q == 0) throw DomainError("prime_count_ap requires q >= 1");
    if (a >= q) throw DomainError("prime_count_ap requires 0 <= a < q");
    check_max(x, ctx, "prime_count_ap");
    if (x < 2) return 0;
    std::vector<std::uint64_t> counts(segment_count(2, x, ctx.segment_size));
    for_each_segment(2, x, 0, ctx, [&](std::size_t i, const SegmentView& seg) {
        std::uint64_t c = 0;
        seg.for_each_prime(seg.lo(), seg.hi(), [&](std::uint64_t p) { c += (p % q == a); });
        counts[i] = c;
    });
    std::uint64_t total = 0;
    for (auto c : counts) total += c;
    return total;
}

GapSummary gap_statistics(std::uint64_t x_lo, std::uint64_t x_hi, const Context& ctx) {
    if (x_lo < 2) throw DomainError("gap_statistics requires x_lo >= 2");
    if (x_hi < x_lo) throw DomainError("gap_statistics requires x_lo <= x_hi");
    check_max(x_hi, ctx, "gap_statistics");

    const auto primes = sieve_range(x_lo, x_hi, ctx).primes();
    if (primes.size() < 2) throw DomainError("gap_statistics: fewer than 2 primes in range");

    GapSummary out;
    const std::uint64_t first_index = prime_count(x_lo - 1, ctx) + 1;
    out.records.reserve(primes.size() - 1);
    for (std::size_t i = 0; i + 1 < primes.size(); ++i) {
        const double gap = static_cast<double>(primes[i + 1] - primes[i]);
        const double normalized = gap / std::log(static_cast<double>(primes[i]));
        out.records.push_back({first_index + i, primes[i], primes[i + 1], normalized});
        if (i == 0 || normalized < out.min_normalized) {
            out.min_normalized = normalized;
            out.min_index = i;
        }
    }
    out.mean_gap = static_cast<double>(primes.back() - primes.front()) /
                   static_cast<double>(primes.size() - 1);
    return out;
}

}  // namespace ptl
