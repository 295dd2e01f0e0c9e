#include "ptl/progressions.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ptl/analytic.hpp"
#include "ptl/arith.hpp"
#include "ptl/error.hpp"
#include "ptl/numeric.hpp"
#include "ptl/parallel.hpp"
#include "ptl/sieve.hpp"

namespace ptl {

namespace {

double li_at(double x, const Context& ctx) {
    return li(x, 0.0, ctx).value;
}

std::vector<BvRecord> bv_records(std::uint64_t x, std::uint64_t Q, const Context& ctx) {
    if (Q == 0) throw DomainError("bv_sum requires Q >= 1");
    if (x < 2) throw DomainError("bv_sum requires x >= 2");
    if (Q > x) throw DomainError("bv_sum requires Q <= x");
    if (x > kBvMaxX) throw ResourceError("bv_sum: x exceeds 10^8");

    Context table_ctx = ctx;
    table_ctx.max_table_span = std::max(ctx.max_table_span, x);
    const auto primes = sieve_range(2, x, table_ctx).primes();
    if (primes.size() > 0 && Q > ctx.work_budget / primes.size())
        throw ResourceError("bv_sum: pi(x) * Q = " + std::to_string(primes.size()) + " * " +
                            std::to_string(Q) + " exceeds the work budget");

    const double main_term = li_at(static_cast<double>(x), ctx);
    std::vector<BvRecord> records(static_cast<std::size_t>(Q));
    std::vector<std::vector<std::uint32_t>> buffers(std::max(1u, ctx.threads));
    parallel_for(records.size(), ctx.threads, [&](unsigned worker, std::size_t i) {
        const std::uint64_t q = i + 1;
        auto& counts = buffers[worker];
        counts.assign(static_cast<std::size_t>(q), 0);
        for (auto p : primes) ++counts[static_cast<std::size_t>(p % q)];
        const double expected = main_term / static_cast<double>(euler_phi(q));
        BvRecord rec{q, 0, -1.0};
        for (std::uint64_t a = 0; a < q; ++a) {
            if (gcd_u64(a, q) != 1) continue;
            const double err = std::fabs(static_cast<double>(counts[a]) - expected);
            if (err > rec.error) rec = {q, a, err};
        }
        records[i] = rec;
    });
    return records;
}

}  // namespace

double ap_expected(double x, std::uint64_t q, const Context& ctx) {
    if (q == 0) throw DomainError("ap_expected requires q >= 1");
    return li_at(x, ctx) / static_cast<double>(euler_phi(q));
}

BvSum bv_sum(std::uint64_t x, std::uint64_t Q, const Context& ctx) {
    BvSum out;
    out.records = bv_records(x, Q, ctx);
    CompensatedSum total;
    for (const auto& r : out.records) total.add(r.error);
    out.total = total.value();
    return out;
}

std::vector<LevelRow> level_probe(std::uint64_t x, std::span<const double> thetas,
                                  const Context& ctx) {
    if (thetas.empty()) throw DomainError("level_probe needs at least one theta");
    std::vector<LevelRow> rows;
    for (double t : thetas) {
        if (!(t >= 0.0) || t > kLevelMaxTheta)
            throw DomainError("level_probe: theta must lie in [0, 0.9]");
        const double raw = std::pow(static_cast<double>(x), t);
        // Nudge past representation error so exact powers such as 10^6^0.5 floor correctly.
        const auto Q = std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::floor(raw * (1 + 1e-12))));
        rows.push_back({t, Q, 0.0, 0.0});
    }
    std::sort(rows.begin(), rows.end(), [](const LevelRow& a, const LevelRow& b) { return a.theta < b.theta; });

    const auto records = bv_records(x, rows.back().Q, ctx);
    const double log_x = std::log(static_cast<double>(x));
    CompensatedSum running;
    std::size_t next = 0;
    for (auto& row : rows) {
        for (; next < row.Q; ++next) running.add(records[next].error);
        row.total = running.value();
        row.normalized = row.total * log_x * log_x / static_cast<double>(x);
    }
    return rows;
}

}  // namespace ptl
