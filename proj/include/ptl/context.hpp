#pragma once

#include <cstdint>

namespace ptl {

unsigned default_thread_count();

/// Limits and tuning knobs shared by every operation.
///
/// Results never depend on `threads`; floating-point reductions are merged in a
/// fixed chunk order. They may depend on `segment_size` in the last few ulps.
struct Context {
    std::uint64_t max_x = 1'000'000'000;        // largest x accepted by counting functions
    std::uint64_t segment_size = 1u << 20;      // numbers per sieve segment
    unsigned threads = default_thread_count();
    std::uint64_t divisor_budget = 1'000'000;   // divisors enumerated per evaluation
    std::uint64_t max_table_span = 1'000'000'000;  // hi - lo + 1 for a materialized PrimeTable
    std::uint64_t work_budget = 4'000'000'000;  // inner-loop operations for bv/gpy sweeps
    double quad_rel_tol = 1e-9;                 // default relative quadrature tolerance
};

}  // namespace ptl
