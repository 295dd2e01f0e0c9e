#pragma once

#include <cmath>
#include <cstdint>
#include <string>

namespace ptl {

using i128 = __int128;
using u128 = unsigned __int128;

/// floor(sqrt(n)), exact for all 64-bit n.
inline std::uint64_t isqrt(std::uint64_t n) {
    auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<long double>(n)));
    while (r > 0 && r > n / r) --r;
    while ((r + 1) <= n / (r + 1)) ++r;
    return r;
}

inline std::uint64_t gcd_u64(std::uint64_t a, std::uint64_t b) {
    while (b) {
        const std::uint64_t t = a % b;
        a = b;
        b = t;
    }
    return a;
}

inline i128 gcd_i128(i128 a, i128 b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b) {
        const i128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

std::string to_string(i128 v);

}  // namespace ptl
