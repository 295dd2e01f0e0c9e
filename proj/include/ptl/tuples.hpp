#pragma once

#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <vector>

#include "ptl/context.hpp"

namespace ptl {

/// A set of shifts H = {h_1 < h_2 < ... < h_k}, nonnegative and distinct.
/// Input order does not matter; duplicates are rejected.
class ShiftTuple {
public:
    explicit ShiftTuple(std::vector<std::uint64_t> shifts);
    ShiftTuple(std::initializer_list<std::uint64_t> shifts)
        : ShiftTuple(std::vector<std::uint64_t>(shifts)) {}

    std::span<const std::uint64_t> shifts() const { return shifts_; }
    std::size_t size() const { return shifts_.size(); }
    std::uint64_t diameter() const { return shifts_.back() - shifts_.front(); }
    std::uint64_t max() const { return shifts_.back(); }

    /// The translate with smallest shift 0.
    ShiftTuple normalized() const;

    friend bool operator==(const ShiftTuple&, const ShiftTuple&) = default;

private:
    std::vector<std::uint64_t> shifts_;
};

/// Number of distinct residues of H modulo the prime p. Throws DomainError if p is not prime.
std::uint64_t nu_p(const ShiftTuple& shifts, std::uint64_t p);

/// A prime p whose residues are all covered by H, if one exists. Only p <= k
/// can qualify: for p > k, nu_p(H) <= k < p.
std::optional<std::uint64_t> covering_prime(const ShiftTuple& shifts);

bool is_admissible(const ShiftTuple& shifts);

struct SingularSeriesValue {
    double value = 0.0;
    std::uint64_t cutoff = 0;
    double tail_bound = 0.0;  // estimated |value - full product|
    bool admissible = false;
};

/// Truncated singular series prod_{p <= cutoff} (1 - 1/p)^{-k} (1 - nu_p(H)/p).
/// The tail estimate uses sum_{p > P} k^2/p^2 ~ k^2/(P log P), reported as an
/// absolute bound value * expm1(k^2 / (P log P)).
SingularSeriesValue singular_series(const ShiftTuple& shifts, std::uint64_t cutoff,
                                    const Context& ctx = {});

/// 2 prod_{2 < p <= cutoff} (1 - 1/(p-1)^2).
double twin_prime_constant(std::uint64_t cutoff, const Context& ctx = {});

struct HlPrediction {
    double value = 0.0;  // S(H) li_k(x), or 0 when H is not admissible
    double singular_series = 0.0;
    double li_k = 0.0;
    bool admissible = false;
};

/// Hardy-Littlewood prediction pi(x; H) ~ S(H) li_k(x), k = |H|.
HlPrediction hl_prediction(double x, const ShiftTuple& shifts, std::uint64_t cutoff,
                           const Context& ctx = {});

inline constexpr unsigned kNarrowestMaxK = 12;
inline constexpr std::uint64_t kNarrowestMaxDiameter = 400;

/// The admissible k-tuple of least diameter (lexicographically least among
/// ties, normalized to start at 0), or nullopt if none has diameter <= max_diameter.
std::optional<ShiftTuple> narrowest_admissible(unsigned k, std::uint64_t max_diameter);

}  // namespace ptl
