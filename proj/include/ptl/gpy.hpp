#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ptl/context.hpp"
#include "ptl/numeric.hpp"
#include "ptl/tuples.hpp"

namespace ptl {

/// Which approximation to Lambda(n; H) is squared inside the moment and detection sums.
enum class Approximation {
    Product,  // Lambda_R(n+h_1) ... Lambda_R(n+h_k)
    Sieve,    // (1/(k+l)!) sum_{d | P_H(n), d <= R} mu(d) (log R/d)^(k+l)
};

struct GpyParams {
    std::uint64_t N = 2;  // detection sums run over n = N+1 .. 2N, moments over n <= N
    ShiftTuple shifts{0};
    unsigned ell = 0;     // extra exponent l of the sieve approximation
    double R = 2.0;       // truncation level
    unsigned r = 1;       // detection threshold
};

/// floor(N^(1/(4k))), never below 1.
double default_truncation(std::uint64_t N, unsigned k);

/// P(n, H) = (n + h_1)(n + h_2)...(n + h_k). Throws OverflowError past 128 bits.
i128 tuple_polynomial(std::uint64_t n, const ShiftTuple& shifts);

/// Lambda_R(n) = sum_{d | n, d <= R} mu(d) log(R/d).
double lambda_R(std::uint64_t n, double R);

/// Lambda_R(n; H) = prod_i Lambda_R(n + h_i).
double lambda_R_product(std::uint64_t n, const ShiftTuple& shifts, double R);

/// Lambda_R(n; H, l) = 1/(k+l)! sum_{d | P(n,H), d <= R} mu(d) (log R/d)^(k+l).
/// Divisors are enumerated from the merged factorizations of the n + h_i.
double lambda_R_sieve(std::uint64_t n, const ShiftTuple& shifts, unsigned ell, double R,
                      const Context& ctx = {});

/// sum_{n <= N} w(n)^2 for the chosen approximation w.
double first_moment(const GpyParams& params, Approximation approx, const Context& ctx = {});

/// sum_{n <= N} Lambda(n + h0) w(n)^2.
double second_moment(const GpyParams& params, std::uint64_t h0, Approximation approx,
                     const Context& ctx = {});

struct Witness {
    std::uint64_t n = 0;
    double weight = 0.0;  // the squared approximation attached to n
    std::vector<std::uint64_t> prime_shifts;        // shifts h with n + h prime
    std::vector<std::uint64_t> prime_power_shifts;  // shifts h with n + h = p^m, m >= 2
    bool certificate = false;  // n carries the largest positive term of the sum

    std::size_t components() const { return prime_shifts.size() + prime_power_shifts.size(); }
};

struct DetectionReport {
    double sum_value = 0.0;
    bool positive = false;
    /// sum_value / (N (log R)^(2k+2l+1)); absent when log R = 0.
    std::optional<double> normalized;
    /// The ten largest weights, plus the certificate n when sum_value > 0.
    std::vector<Witness> witnesses;
    GpyParams params;
    unsigned k = 0;
    bool interval = false;  // true for the all-subsets sum over (n, n + h]
};

inline constexpr std::size_t kWitnessCount = 10;
inline constexpr std::uint64_t kSubsetBudget = 100'000;

/// S = sum_{n=N+1}^{2N} (sum_i Lambda(n + h_i) - r log 3N) w(n)^2. Requires max(H) < N,
/// which keeps every Lambda(n + h_i) below log 3N.
DetectionReport detection_sum(const GpyParams& params, Approximation approx,
                              const Context& ctx = {});

/// S' = sum_{n=N+1}^{2N} (sum_{1 <= j <= h} Lambda(n + j) - r log 3N) sum_H w_H(n)^2,
/// the inner sum running over every k-element subset H of {1, ..., h}.
DetectionReport detection_sum_interval(std::uint64_t N, std::uint64_t h, unsigned k, unsigned ell,
                                       double R, unsigned r,
                                       Approximation approx = Approximation::Sieve,
                                       const Context& ctx = {});

}  // namespace ptl
