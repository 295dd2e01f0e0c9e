// Brute-force reference implementations. Deliberately slow and independent of the
// library: nothing here calls into ptl.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <vector>

namespace oracle {

using u64 = std::uint64_t;

inline bool is_prime(u64 n) {
    if (n < 2) return false;
    for (u64 d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

inline std::map<u64, unsigned> factor(u64 n) {
    std::map<u64, unsigned> f;
    for (u64 d = 2; d * d <= n; ++d)
        while (n % d == 0) {
            ++f[d];
            n /= d;
        }
    if (n > 1) ++f[n];
    return f;
}

inline int mobius(u64 n) {
    int mu = 1;
    for (auto [p, e] : factor(n)) {
        if (e > 1) return 0;
        mu = -mu;
    }
    return mu;
}

inline u64 phi(u64 q) {
    u64 c = 0;
    for (u64 a = 1; a <= q; ++a)
        if (std::gcd(a, q) == 1) ++c;
    return c;
}

inline double mangoldt(u64 n) {
    const auto f = factor(n);
    return f.size() == 1 ? std::log(static_cast<double>(f.begin()->first)) : 0.0;
}

inline std::vector<u64> divisors(u64 n) {
    std::vector<u64> d;
    for (u64 i = 1; i <= n; ++i)
        if (n % i == 0) d.push_back(i);
    return d;
}

inline double mangoldt_k(u64 n, unsigned k) {
    double s = 0;
    for (u64 d : divisors(n)) s += mobius(d) * std::pow(std::log(static_cast<double>(n / d)), k);
    return s;
}

inline std::vector<u64> primes_upto(u64 x) {
    std::vector<u64> out;
    for (u64 n = 2; n <= x; ++n)
        if (is_prime(n)) out.push_back(n);
    return out;
}

inline u64 pi(u64 x) { return primes_upto(x).size(); }

inline bool is_prime_power(u64 n) { return n > 1 && factor(n).size() == 1; }

// d runs over 1..R directly; only divisors of n contribute.
inline double lambda_R(u64 n, double R) {
    double s = 0;
    for (u64 d = 1; static_cast<double>(d) <= R; ++d)
        if (n % d == 0) s += mobius(d) * std::log(R / static_cast<double>(d));
    return s;
}

// For squarefree d, d | prod(n + h) iff peeling gcds against each factor leaves 1.
// Non-squarefree d carry mu = 0, so the peeling shortcut never matters for them.
inline double lambda_R_sieve(u64 n, const std::vector<u64>& H, unsigned ell, double R) {
    const unsigned e = static_cast<unsigned>(H.size()) + ell;
    double s = 0;
    for (u64 d = 1; static_cast<double>(d) <= R; ++d) {
        u64 rest = d;
        for (u64 h : H) rest /= std::gcd(rest, n + h);
        if (rest == 1) s += mobius(d) * std::pow(std::log(R / static_cast<double>(d)), e);
    }
    double fact = 1;
    for (unsigned i = 2; i <= e; ++i) fact *= i;
    return s / fact;
}

inline double weight(u64 n, const std::vector<u64>& H, double R, bool sieve, unsigned ell) {
    if (sieve) return lambda_R_sieve(n, H, ell, R);
    double w = 1;
    for (u64 h : H) w *= lambda_R(n + h, R);
    return w;
}

inline double first_moment(u64 N, const std::vector<u64>& H, double R, bool sieve, unsigned ell) {
    double s = 0;
    for (u64 n = 1; n <= N; ++n) {
        const double w = weight(n, H, R, sieve, ell);
        s += w * w;
    }
    return s;
}

inline double second_moment(u64 N, const std::vector<u64>& H, u64 h0, double R, bool sieve, unsigned ell) {
    double s = 0;
    for (u64 n = 1; n <= N; ++n) {
        const double w = weight(n, H, R, sieve, ell);
        s += mangoldt(n + h0) * w * w;
    }
    return s;
}

inline double detection(u64 N, const std::vector<u64>& H, double R, unsigned r, bool sieve, unsigned ell) {
    const double thr = r * std::log(3.0 * static_cast<double>(N));
    double s = 0;
    for (u64 n = N + 1; n <= 2 * N; ++n) {
        double lam = 0;
        for (u64 h : H) lam += mangoldt(n + h);
        const double w = weight(n, H, R, sieve, ell);
        s += (lam - thr) * w * w;
    }
    return s;
}

inline void subsets(u64 h, unsigned k, std::vector<u64>& cur, u64 next, std::vector<std::vector<u64>>& out) {
    if (cur.size() == k) {
        out.push_back(cur);
        return;
    }
    for (u64 j = next; j <= h; ++j) {
        cur.push_back(j);
        subsets(h, k, cur, j + 1, out);
        cur.pop_back();
    }
}

inline double detection_interval(u64 N, u64 h, unsigned k, unsigned ell, double R, unsigned r, bool sieve) {
    std::vector<std::vector<u64>> all;
    std::vector<u64> cur;
    subsets(h, k, cur, 1, all);
    const double thr = r * std::log(3.0 * static_cast<double>(N));
    double s = 0;
    for (u64 n = N + 1; n <= 2 * N; ++n) {
        double lam = 0;
        for (u64 j = 1; j <= h; ++j) lam += mangoldt(n + j);
        double inner = 0;
        for (const auto& H : all) {
            const double w = weight(n, H, R, sieve, ell);
            inner += w * w;
        }
        s += (lam - thr) * inner;
    }
    return s;
}

// Composite Simpson on a uniform grid.
inline double simpson(double a, double b, unsigned k, std::size_t panels) {
    const double hstep = (b - a) / static_cast<double>(panels);
    auto f = [k](double t) { return 1.0 / std::pow(std::log(t), k); };
    double s = f(a) + f(b);
    for (std::size_t i = 1; i < panels; ++i) s += f(a + hstep * static_cast<double>(i)) * (i % 2 ? 4 : 2);
    return s * hstep / 3.0;
}

}  // namespace oracle
