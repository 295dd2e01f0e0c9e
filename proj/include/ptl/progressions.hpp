#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ptl/context.hpp"

namespace ptl {

/// li(x) / phi(q), the expected count of primes <= x in each coprime class mod q.
double ap_expected(double x, std::uint64_t q, const Context& ctx = {});

struct BvRecord {
    std::uint64_t q = 1;
    std::uint64_t worst_a = 0;  // coprime residue attaining the maximum; smallest on ties
    double error = 0.0;         // |pi(x; q, worst_a) - li(x)/phi(q)|
};

struct BvSum {
    double total = 0.0;
    std::vector<BvRecord> records;  // one per q = 1..Q, ascending
};

/// sum_{q <= Q} max_{(a,q)=1} |pi(x; q, a) - li(x)/phi(q)|. The q = 1 term is |pi(x) - li(x)|.
BvSum bv_sum(std::uint64_t x, std::uint64_t Q, const Context& ctx = {});

struct LevelRow {
    double theta = 0.0;
    std::uint64_t Q = 1;  // floor(x^theta)
    double total = 0.0;
    double normalized = 0.0;  // total (log x)^2 / x
};

/// bv_sum at Q = floor(x^theta) for each theta, sorted by theta. One pass serves every row.
std::vector<LevelRow> level_probe(std::uint64_t x, std::span<const double> thetas,
                                  const Context& ctx = {});

inline constexpr std::uint64_t kBvMaxX = 100'000'000;
inline constexpr double kLevelMaxTheta = 0.9;

}  // namespace ptl
